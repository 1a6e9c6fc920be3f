//! Length oracle by linear algebra: for an ideal `J ⊇ M` with `M` generated
//! by pure powers `x_i^(b_i)`, `ℓ(S/J) = dim S/M − rank{x^a·g mod M}` over
//! all standard monomials `x^a` of `M` and generators `g`.

#![allow(dead_code)]

use std::collections::HashMap;

use fsig_core::ffpoly::Polynomial;

struct Eliminator {
    p: u64,
    pivots: HashMap<usize, Vec<(usize, u64)>>,
}

fn inv(a: u64, p: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

impl Eliminator {
    fn new(p: u64) -> Self {
        Self {
            p,
            pivots: HashMap::new(),
        }
    }

    /// Reduces a sparse row (sorted by column) and keeps it if independent.
    fn insert(&mut self, mut row: Vec<(usize, u64)>) {
        let p = self.p;
        while let Some(&(lead, c)) = row.first() {
            match self.pivots.get(&lead) {
                None => {
                    let ci = inv(c, p);
                    for t in &mut row {
                        t.1 = t.1 * ci % p;
                    }
                    self.pivots.insert(lead, row);
                    return;
                }
                Some(piv) => {
                    // row -= c * piv
                    let mut out = Vec::with_capacity(row.len() + piv.len());
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < piv.len() {
                        let take_row = j == piv.len() || (i < row.len() && row[i].0 < piv[j].0);
                        let take_piv = i == row.len() || (j < piv.len() && piv[j].0 < row[i].0);
                        if take_row {
                            out.push(row[i]);
                            i += 1;
                        } else if take_piv {
                            out.push((piv[j].0, (p - c * piv[j].1 % p) % p));
                            j += 1;
                        } else {
                            let v = (row[i].1 + p - c * piv[j].1 % p) % p;
                            if v != 0 {
                                out.push((row[i].0, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn index(e: &[u64], bounds: &[u64]) -> usize {
    e.iter()
        .zip(bounds)
        .fold(0usize, |acc, (&x, &b)| acc * b as usize + x as usize)
}

/// `ℓ(S/(M + (gens)))` where `M = (x_i^(bounds_i))`.
pub fn length_over_box(bounds: &[u64], gens: &[Polynomial]) -> u128 {
    let n = bounds.len();
    let size: usize = bounds.iter().map(|&b| b as usize).product();
    let p = gens.first().map(|g| g.ring().p()).unwrap_or(2);
    let mut elim = Eliminator::new(p);
    let mut a = vec![0u64; n];
    for _ in 0..size {
        for g in gens {
            let mut row: Vec<(usize, u64)> = Vec::new();
            for (e, c) in g.terms() {
                let shifted: Vec<u64> = e.iter().zip(&a).map(|(x, y)| x + y).collect();
                if shifted.iter().zip(bounds).all(|(x, b)| x < b) {
                    row.push((index(&shifted, bounds), c));
                }
            }
            if !row.is_empty() {
                row.sort_unstable();
                // higher columns first keeps pivots near the top of the staircase
                elim.insert(row);
            }
        }
        for k in (0..n).rev() {
            a[k] += 1;
            if a[k] < bounds[k] {
                break;
            }
            a[k] = 0;
        }
    }
    size as u128 - elim.rank() as u128
}

/// `ℓ(S/(m^[q] : F)) = rank of multiplication by F on S/m^[q]`.
pub fn colon_length(f: &Polynomial, q: u64) -> u128 {
    let bounds = vec![q; f.nvars()];
    let size = (q as u128).pow(f.nvars() as u32);
    size - length_over_box(&bounds, std::slice::from_ref(f))
}

/// `f^k`, dropping terms with an exponent `>= q` after every step.
pub fn truncated_power(f: &Polynomial, k: u64, q: u64) -> Polynomial {
    let trunc = |g: Polynomial| {
        let terms = g
            .terms()
            .filter(|(e, _)| e.iter().all(|&x| x < q))
            .map(|(e, c)| (e.to_vec(), c))
            .collect();
        Polynomial::from_terms(g.ring(), terms)
    };
    let mut acc = Polynomial::one(f.ring());
    for _ in 0..k {
        acc = trunc(acc.mul(f).unwrap());
    }
    acc
}
