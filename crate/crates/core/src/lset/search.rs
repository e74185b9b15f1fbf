//! Searches for the integers the two constructions are parameterized by.
//!
//! Every search returns the smallest qualifying value and fails with a
//! typed error once its bound is exhausted.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::error::{LsetError, Result};
use super::set::{IntSet, SetKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub n: u128,
    pub count: u128,
    pub ratio: Ratio<u128>,
}

/// `|L ∩ [1, n]|` together with the exact ratio `count / n`.
pub fn lower_density_prefix(set: &IntSet, n: u128) -> Result<DensityEstimate> {
    if n == 0 {
        return Err(LsetError::InvalidArgument("density prefix needs n >= 1".into()));
    }
    let count = count_members(set, 1, n)?;
    Ok(DensityEstimate {
        n,
        count,
        ratio: Ratio::new(count, n),
    })
}

fn count_members(set: &IntSet, lo: u128, hi: u128) -> Result<u128> {
    if let SetKind::Primes = set.kind() {
        return Ok(set.members(lo, hi)?.len() as u128);
    }
    let mut count = 0;
    let mut from = lo;
    while let Some(m) = set.next_member(from, hi)? {
        count += 1;
        if m == hi {
            break;
        }
        from = m + 1;
    }
    Ok(count)
}

/// Smallest `y` in `[from, last_start]` such that `[y, y + len - 1]` holds no member.
fn first_gap(set: &IntSet, len: u128, from: u128, last_start: u128) -> Result<Option<u128>> {
    debug_assert!(len >= 1);
    let mut y = from.max(1);
    if let SetKind::Squares = set.kind() {
        // The gap after r² holds 2r non-members, so no window of length
        // `len` starts before ceil(len/2)².
        let r = len.div_ceil(2);
        if let Some(sq) = r.checked_mul(r) {
            y = y.max(sq);
        } else {
            return Ok(None);
        }
    }
    while y <= last_start {
        let end = y
            .checked_add(len - 1)
            .ok_or(LsetError::Overflow("gap window end"))?;
        match set.next_member(y, end)? {
            None => return Ok(Some(y)),
            Some(m) => y = m + 1,
        }
    }
    Ok(None)
}

/// Porosity witness: smallest `y <= search_bound` with `[y, y + n - 1] ∩ L = ∅`.
/// `None` only means no gap was found below the bound.
pub fn gap_witness(set: &IntSet, n: u128, search_bound: u128) -> Result<Option<u128>> {
    if n == 0 {
        return Err(LsetError::InvalidArgument("gap length must be >= 1".into()));
    }
    first_gap(set, n, 1, search_bound)
}

/// `g(x)`: the least `a` such that `L` meets `[a·x - a, a·x + a]`.
pub fn g_of(set: &IntSet, x: u128, a_max: u128) -> Result<u128> {
    if x < 2 {
        return Err(LsetError::InvalidArgument(format!("g(x) needs x >= 2, got {x}")));
    }
    for a in 1..=a_max {
        let lo = a.checked_mul(x - 1).ok_or(LsetError::Overflow("a*x - a"))?;
        let hi = a.checked_mul(x + 1).ok_or(LsetError::Overflow("a*x + a"))?;
        if set.next_member(lo, hi)?.is_some() {
            return Ok(a);
        }
    }
    Err(LsetError::GExceedsCap { x, a_max })
}

/// A value of `g(x)` read with a scan cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GValue {
    Exact(u128),
    /// `g(x)` is larger than the contained cap.
    AboveCap(u128),
}

impl GValue {
    /// Largest value `g(x)` is known to be at least.
    pub fn lower_bound(self) -> u128 {
        match self {
            GValue::Exact(g) => g,
            GValue::AboveCap(cap) => cap + 1,
        }
    }

    pub fn exact(self) -> Option<u128> {
        match self {
            GValue::Exact(g) => Some(g),
            GValue::AboveCap(_) => None,
        }
    }
}

pub fn g_value(set: &IntSet, x: u128, a_max: u128) -> Result<GValue> {
    match g_of(set, x, a_max) {
        Ok(g) => Ok(GValue::Exact(g)),
        Err(LsetError::GExceedsCap { a_max, .. }) => Ok(GValue::AboveCap(a_max)),
        Err(e) => Err(e),
    }
}

/// Smallest `x <= x_bound` with `a·x + b ∉ L` for all `a ∈ [1, t]`, `b ∈ [-t, t]`.
pub fn find_x(set: &IntSet, t: u128, x_bound: u128) -> Result<u128> {
    if t == 0 {
        return Err(LsetError::InvalidArgument("t must be >= 1".into()));
    }
    'candidates: for x in 1..=x_bound {
        for a in 1..=t {
            let centre = a.checked_mul(x).ok_or(LsetError::Overflow("a*x"))?;
            let lo = centre.saturating_sub(t).max(1);
            let hi = centre.checked_add(t).ok_or(LsetError::Overflow("a*x + t"))?;
            if set.next_member(lo, hi)?.is_some() {
                continue 'candidates;
            }
        }
        return Ok(x);
    }
    Err(LsetError::NoXBelowBound {
        what: format!("L ∩ {{a·x + b : a ∈ [1,{t}], b ∈ [-{t},{t}]}} = ∅"),
        x_bound,
    })
}

/// Smallest `x ∈ [2, x_bound]` whose `g(x)` is at least `g_target`.
pub fn find_x_with_g_at_least(
    set: &IntSet,
    g_target: u128,
    x_bound: u128,
    a_max: u128,
) -> Result<(u128, GValue)> {
    if a_max < g_target {
        return Err(LsetError::InvalidArgument(format!(
            "a_max = {a_max} cannot certify g >= {g_target}"
        )));
    }
    for x in 2..=x_bound {
        let g = g_value(set, x, a_max)?;
        if g.lower_bound() >= g_target {
            return Ok((x, g));
        }
    }
    Err(LsetError::NoXBelowBound {
        what: format!("g(x) >= {g_target}"),
        x_bound,
    })
}

fn checked_sum(values: &[u128]) -> Result<u128> {
    values
        .iter()
        .try_fold(0u128, |acc, &v| acc.checked_add(v))
        .ok_or(LsetError::Overflow("sum of set"))
}

/// Greedy extension of a far-from-L set: smallest `y > ΣZ` with
/// `[y, y + ΣZ] ∩ L = ∅`.
pub fn far_from_l_extend(set: &IntSet, z: &[u128], search_bound: u128) -> Result<u128> {
    let sum = checked_sum(z)?;
    let len = sum.checked_add(1).ok_or(LsetError::Overflow("window length"))?;
    first_gap(set, len, sum + 1, search_bound)?.ok_or(LsetError::NoGapBelowBound {
        len,
        from: sum + 1,
        search_bound,
    })
}

/// `count` greedy far-from-L elements, ascending.
pub fn far_from_l_set(set: &IntSet, count: usize, search_bound: u128) -> Result<Vec<u128>> {
    let mut z = Vec::with_capacity(count);
    for _ in 0..count {
        let y = far_from_l_extend(set, &z, search_bound)?;
        z.push(y);
    }
    Ok(z)
}

/// Smallest `p ∈ L`, `min_p <= p <= search_bound`, whose successor in `L`
/// is at least `p + k`.
pub fn find_lonely(set: &IntSet, k: u128, min_p: u128, search_bound: u128) -> Result<u128> {
    if k == 0 {
        return Err(LsetError::InvalidArgument("loneliness k must be >= 1".into()));
    }
    let mut from = min_p.max(1);
    if let SetKind::Squares = set.kind() {
        // (r+1)² - r² = 2r + 1, so a k-lonely square has 2r + 1 >= k.
        let r = (k - 1).div_ceil(2);
        from = from.max(r.checked_mul(r).ok_or(LsetError::Overflow("r²"))?);
    }
    loop {
        let p = set
            .next_member(from, search_bound)?
            .ok_or(LsetError::NoLonelyBelowBound {
                k,
                min_p,
                search_bound,
            })?;
        if k == 1 {
            return Ok(p);
        }
        let end = p.checked_add(k - 1).ok_or(LsetError::Overflow("p + k"))?;
        match set.next_member(p + 1, end)? {
            None => return Ok(p),
            Some(q) => from = q,
        }
    }
}

/// `p_1 >= 2α` α-lonely, then each `p_k > p_{k-1}` that is
/// `(p_1 + … + p_{k-1} + α)`-lonely.
pub fn lonely_sequence(
    set: &IntSet,
    count: usize,
    alpha: u128,
    search_bound: u128,
) -> Result<Vec<u128>> {
    if alpha == 0 {
        return Err(LsetError::InvalidArgument("alpha must be >= 1".into()));
    }
    let mut seq: Vec<u128> = Vec::with_capacity(count);
    let mut prefix = 0u128;
    for _ in 0..count {
        let (k, min_p) = match seq.last() {
            None => (
                alpha,
                alpha.checked_mul(2).ok_or(LsetError::Overflow("2*alpha"))?,
            ),
            Some(&prev) => (
                prefix
                    .checked_add(alpha)
                    .ok_or(LsetError::Overflow("loneliness target"))?,
                prev + 1,
            ),
        };
        let p = find_lonely(set, k, min_p, search_bound)?;
        prefix = prefix
            .checked_add(p)
            .ok_or(LsetError::Overflow("lonely prefix sum"))?;
        seq.push(p);
    }
    Ok(seq)
}

/// `L` minus every window `[3^t, 3^t + t]`.
pub fn perturb(set: &IntSet) -> IntSet {
    IntSet::perturbed(set.clone())
}
