use serde::Serialize;

use crate::error::{Error, Result};

/// Number of standard monomials of a monomial ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Colength {
    Finite(u128),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u128> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaircaseCount {
    pub colength: Colength,
    /// Smallest pure power of each variable among the leading terms.
    pub bounds: Vec<Option<u64>>,
}

/// Counts monomials outside the ideal generated by `leads` (exponent
/// vectors of arity `nvars`) by slicing the pure-power bounding box one
/// variable at a time.
pub fn staircase_count(leads: &[Vec<u64>], nvars: usize, max_volume: u128) -> Result<StaircaseCount> {
    let bounds: Vec<Option<u64>> = (0..nvars)
        .map(|i| {
            leads
                .iter()
                .filter(|e| e.iter().enumerate().all(|(j, &x)| j == i || x == 0) && e[i] > 0)
                .map(|e| e[i])
                .min()
        })
        .collect();
    if leads.iter().any(|e| e.iter().all(|&x| x == 0)) {
        return Ok(StaircaseCount {
            colength: Colength::Finite(0),
            bounds,
        });
    }
    if bounds.iter().any(|b| b.is_none()) {
        return Ok(StaircaseCount {
            colength: Colength::Infinite,
            bounds,
        });
    }
    let box_bounds: Vec<u64> = bounds.iter().map(|b| b.unwrap()).collect();
    let volume = box_bounds.iter().try_fold(1u128, |acc, &b| acc.checked_mul(b as u128));
    match volume {
        Some(v) if v <= max_volume => {}
        _ => {
            return Err(Error::BudgetExhausted(format!(
                "staircase bounding box {box_bounds:?} exceeds volume cap {max_volume}"
            )))
        }
    }
    let refs: Vec<&[u64]> = leads.iter().map(|e| e.as_slice()).collect();
    Ok(StaircaseCount {
        colength: Colength::Finite(count_slices(&refs, 0, &box_bounds)),
        bounds,
    })
}

fn count_slices(leads: &[&[u64]], k: usize, bounds: &[u64]) -> u128 {
    if leads.iter().any(|e| e[k..].iter().all(|&x| x == 0)) {
        return 0;
    }
    if k == bounds.len() {
        return 1;
    }
    let b = bounds[k];
    let mut breaks: Vec<u64> = leads.iter().map(|e| e[k]).filter(|&v| v < b).collect();
    breaks.push(0);
    breaks.sort_unstable();
    breaks.dedup();
    let mut total = 0u128;
    for (idx, &start) in breaks.iter().enumerate() {
        let end = breaks.get(idx + 1).copied().unwrap_or(b);
        let active: Vec<&[u64]> = leads.iter().copied().filter(|e| e[k] <= start).collect();
        let inner = count_slices(&active, k + 1, bounds);
        total += (end - start) as u128 * inner;
    }
    total
}

/// Size of the largest variable subset containing the support of no
/// leading monomial.
pub fn dimension_from_leads(leads: &[Vec<u64>], nvars: usize) -> Result<usize> {
    if leads.iter().any(|e| e.iter().all(|&x| x == 0)) {
        return Err(Error::UnitIdeal);
    }
    if nvars >= 64 {
        return Err(Error::InvalidInput("too many variables for subset search".into()));
    }
    let supports: Vec<u64> = leads
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let mut best = 0usize;
    for subset in 0u64..(1u64 << nvars) {
        let size = subset.count_ones() as usize;
        if size > best && supports.iter().all(|s| s & !subset != 0) {
            best = size;
        }
    }
    Ok(best)
}
