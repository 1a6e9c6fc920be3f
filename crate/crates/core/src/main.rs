fn main() {
    std::process::exit(fsig_core::cli::run(std::env::args_os()));
}
