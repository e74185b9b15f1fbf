use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::error::{LsetError, Result};
use super::primes;

/// Constructor tag of an [`IntSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetKind {
    Primes,
    Squares,
    /// `base^k` for `k >= 1`.
    Powers { base: u128 },
    /// `k!` for `k >= 1`, i.e. 1, 2, 6, 24, ...
    Factorials,
    /// Positive integers congruent to `residue` modulo `modulus`.
    Arithmetic { residue: u128, modulus: u128 },
    Explicit(Arc<[u128]>),
    File { path: PathBuf, members: Arc<[u128]> },
    /// The inner set with every window `[3^t, 3^t + t]` (t >= 1) removed.
    Perturbed(Box<IntSet>),
}

/// A subset of the positive integers with a membership oracle that is
/// decidable up to `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SetDoc", into = "SetDoc")]
pub struct IntSet {
    kind: SetKind,
    bound: u128,
}

impl IntSet {
    pub fn primes() -> Self {
        Self::with_kind(SetKind::Primes)
    }

    pub fn squares() -> Self {
        Self::with_kind(SetKind::Squares)
    }

    pub fn powers(base: u128) -> Result<Self> {
        if base < 2 {
            return Err(LsetError::InvalidArgument(format!(
                "powers need a base >= 2, got {base}"
            )));
        }
        Ok(Self::with_kind(SetKind::Powers { base }))
    }

    pub fn factorials() -> Self {
        Self::with_kind(SetKind::Factorials)
    }

    pub fn arithmetic(residue: u128, modulus: u128) -> Result<Self> {
        if modulus == 0 {
            return Err(LsetError::InvalidArgument("arithmetic modulus must be >= 1".into()));
        }
        Ok(Self::with_kind(SetKind::Arithmetic {
            residue: residue % modulus,
            modulus,
        }))
    }

    /// A finite set given by its members; membership is decidable everywhere.
    pub fn explicit<I: IntoIterator<Item = u128>>(members: I) -> Result<Self> {
        let members = normalize(members)?;
        Ok(Self::with_kind(SetKind::Explicit(members.into())))
    }

    /// Loads newline-separated integers. Blank lines and `#` comments are
    /// skipped; a `# bound N` comment declares how far the listing is
    /// complete. Without it the data is trusted up to its largest value.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LsetError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let mut values = Vec::new();
        let mut declared = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(rest) = comment.strip_prefix("bound") {
                    let rest = rest.trim_start_matches([':', ' ', '\t']);
                    let value = rest.parse::<u128>().map_err(|_| LsetError::FileParse {
                        path: path.display().to_string(),
                        line: idx + 1,
                        reason: format!("bad bound `{rest}`"),
                    })?;
                    declared = Some(value);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let value = line.parse::<u128>().map_err(|_| LsetError::FileParse {
                path: path.display().to_string(),
                line: idx + 1,
                reason: format!("expected a positive integer, found `{line}`"),
            })?;
            if value == 0 {
                return Err(LsetError::FileParse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    reason: "0 is not a positive integer".into(),
                });
            }
            values.push(value);
        }
        let members = normalize(values)?;
        let bound = declared.unwrap_or_else(|| members.last().copied().unwrap_or(0));
        if let Some(&max) = members.last() {
            if max > bound {
                return Err(LsetError::FileParse {
                    path: path.display().to_string(),
                    line: 0,
                    reason: format!("member {max} lies beyond the declared bound {bound}"),
                });
            }
        }
        Ok(IntSet {
            kind: SetKind::File {
                path: path.to_path_buf(),
                members: members.into(),
            },
            bound,
        })
    }

    pub fn perturbed(inner: IntSet) -> Self {
        let bound = inner.bound;
        IntSet {
            kind: SetKind::Perturbed(Box::new(inner)),
            bound,
        }
    }

    fn with_kind(kind: SetKind) -> Self {
        let bound = natural_bound(&kind);
        IntSet { kind, bound }
    }

    /// Caps the enumeration bound at `bound` (never raises it).
    pub fn with_bound(mut self, bound: u128) -> Self {
        self.bound = self.bound.min(bound);
        if let SetKind::Perturbed(inner) = &mut self.kind {
            let capped = (**inner).clone().with_bound(bound);
            **inner = capped;
        }
        self
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    /// Largest `n` for which membership is decidable.
    pub fn bound(&self) -> u128 {
        self.bound
    }

    /// Canonical spec string in the CLI mini-language.
    pub fn spec(&self) -> String {
        match &self.kind {
            SetKind::Primes => "primes".into(),
            SetKind::Squares => "squares".into(),
            SetKind::Powers { base } => format!("powers:{base}"),
            SetKind::Factorials => "factorials".into(),
            SetKind::Arithmetic { residue, modulus } => format!("arith:{residue},{modulus}"),
            SetKind::Explicit(m) => {
                let items: Vec<String> = m.iter().map(u128::to_string).collect();
                format!("explicit:{}", items.join(","))
            }
            SetKind::File { path, .. } => format!("file:{}", path.display()),
            SetKind::Perturbed(inner) => format!("perturb:{}", inner.spec()),
        }
    }

    fn check(&self, n: u128) -> Result<()> {
        if n > self.bound {
            return Err(LsetError::Undecidable {
                set: self.spec(),
                n,
                bound: self.bound,
            });
        }
        Ok(())
    }

    pub fn contains(&self, n: u128) -> Result<bool> {
        self.check(n)?;
        if n == 0 {
            return Ok(false);
        }
        Ok(match &self.kind {
            SetKind::Primes => primes::is_prime(n as u64),
            SetKind::Squares => {
                let r = n.isqrt();
                r * r == n
            }
            SetKind::Powers { base } => {
                let mut p = *base;
                while p < n {
                    match p.checked_mul(*base) {
                        Some(q) => p = q,
                        None => return Ok(false),
                    }
                }
                p == n
            }
            SetKind::Factorials => {
                let (mut f, mut k) = (1u128, 1u128);
                while f < n {
                    k += 1;
                    match f.checked_mul(k) {
                        Some(q) => f = q,
                        None => return Ok(false),
                    }
                }
                f == n
            }
            SetKind::Arithmetic { residue, modulus } => n % modulus == *residue,
            SetKind::Explicit(m) | SetKind::File { members: m, .. } => m.binary_search(&n).is_ok(),
            SetKind::Perturbed(inner) => inner.contains(n)? && removal_window(n).is_none(),
        })
    }

    /// Smallest member in `[lo, hi]`, if any. The whole range must be decidable.
    pub fn next_member(&self, lo: u128, hi: u128) -> Result<Option<u128>> {
        self.check(hi)?;
        let lo = lo.max(1);
        if lo > hi {
            return Ok(None);
        }
        let found = match &self.kind {
            SetKind::Primes => {
                let mut n = lo;
                loop {
                    if primes::is_prime(n as u64) {
                        break Some(n);
                    }
                    if n == hi {
                        break None;
                    }
                    n += 1;
                }
            }
            SetKind::Squares => {
                let mut r = lo.isqrt();
                if r * r < lo {
                    r += 1;
                }
                r.checked_mul(r)
            }
            SetKind::Powers { base } => {
                let mut p = Some(*base);
                while let Some(q) = p {
                    if q >= lo {
                        break;
                    }
                    p = q.checked_mul(*base);
                }
                p
            }
            SetKind::Factorials => {
                let (mut f, mut k) = (Some(1u128), 1u128);
                while let Some(q) = f {
                    if q >= lo {
                        break;
                    }
                    k += 1;
                    f = q.checked_mul(k);
                }
                f
            }
            SetKind::Arithmetic { residue, modulus } => {
                let r = lo % modulus;
                let step = if *residue >= r {
                    residue - r
                } else {
                    modulus - (r - residue)
                };
                lo.checked_add(step)
            }
            SetKind::Explicit(m) | SetKind::File { members: m, .. } => {
                let i = m.partition_point(|&v| v < lo);
                m.get(i).copied()
            }
            SetKind::Perturbed(inner) => {
                let mut from = lo;
                loop {
                    match inner.next_member(from, hi)? {
                        None => break None,
                        Some(m) => match removal_window(m) {
                            None => break Some(m),
                            Some((_, end)) => {
                                if end >= hi {
                                    break None;
                                }
                                from = end + 1;
                            }
                        },
                    }
                }
            }
        };
        Ok(found.filter(|&m| m <= hi))
    }

    /// All members in `[lo, hi]`, ascending.
    pub fn members(&self, lo: u128, hi: u128) -> Result<Vec<u128>> {
        self.check(hi)?;
        let lo = lo.max(1);
        if lo > hi {
            return Ok(Vec::new());
        }
        if let SetKind::Primes = self.kind {
            return Ok(primes::primes_in(lo as u64, hi as u64)
                .into_iter()
                .map(u128::from)
                .collect());
        }
        let mut out = Vec::new();
        let mut from = lo;
        while let Some(m) = self.next_member(from, hi)? {
            out.push(m);
            if m == hi {
                break;
            }
            from = m + 1;
        }
        Ok(out)
    }

    /// Whether `[lo, hi]` contains no member.
    pub fn is_empty_between(&self, lo: u128, hi: u128) -> Result<bool> {
        Ok(self.next_member(lo, hi)?.is_none())
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// Serialized form: the spec string and bound. File-backed sets also carry
/// their members so a document never depends on the file still existing.
#[derive(Serialize, Deserialize)]
struct SetDoc {
    spec: String,
    bound: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    members: Option<Vec<u128>>,
}

impl From<IntSet> for SetDoc {
    fn from(set: IntSet) -> Self {
        fn file_members(set: &IntSet) -> Option<Vec<u128>> {
            match &set.kind {
                SetKind::File { members, .. } => Some(members.to_vec()),
                SetKind::Perturbed(inner) => file_members(inner),
                _ => None,
            }
        }
        SetDoc {
            spec: set.spec(),
            bound: set.bound,
            members: file_members(&set),
        }
    }
}

impl TryFrom<SetDoc> for IntSet {
    type Error = LsetError;

    fn try_from(doc: SetDoc) -> Result<Self> {
        fn build(spec: &str, members: &Option<Vec<u128>>, bound: u128) -> Result<IntSet> {
            if let Some(inner) = spec.strip_prefix("perturb:") {
                return Ok(IntSet::perturbed(build(inner, members, bound)?));
            }
            match (spec.strip_prefix("file:"), members) {
                (Some(path), Some(m)) => Ok(IntSet {
                    kind: SetKind::File {
                        path: PathBuf::from(path),
                        members: normalize(m.iter().copied())?.into(),
                    },
                    bound,
                }),
                _ => super::parse::parse_set_spec(spec),
            }
        }
        Ok(build(&doc.spec, &doc.members, doc.bound)?.with_bound(doc.bound))
    }
}

fn natural_bound(kind: &SetKind) -> u128 {
    match kind {
        SetKind::Primes => u64::MAX as u128,
        SetKind::Perturbed(inner) => inner.bound,
        SetKind::File { members, .. } => members.last().copied().unwrap_or(0),
        _ => u128::MAX,
    }
}

fn normalize<I: IntoIterator<Item = u128>>(members: I) -> Result<Vec<u128>> {
    let mut v: Vec<u128> = members.into_iter().collect();
    if v.contains(&0) {
        return Err(LsetError::InvalidArgument("set members must be >= 1".into()));
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// The window `[3^t, 3^t + t]` containing `n`, if any.
pub fn removal_window(n: u128) -> Option<(u128, u128)> {
    let mut t = 1u128;
    let mut p = 3u128;
    while p <= n {
        let end = p + t;
        if n <= end {
            return Some((p, end));
        }
        p = p.checked_mul(3)?;
        t += 1;
    }
    None
}
