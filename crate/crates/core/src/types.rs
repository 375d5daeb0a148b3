//! Path types.
//!
//! A Hamiltonian oriented path is described by its block lengths. The signed
//! form ([`SignedType`]) records the direction of each block; consecutive
//! blocks always point opposite ways. The unsigned form ([`Composition`]) only
//! keeps the lengths and is the domain of the path-function.
//!
//! A path enumerated from its other end has type `-reverse(a)`, so two signed
//! types describe the same set of paths exactly when `a == b` or
//! `a == -reverse(b)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("path type is undefined after zero reduction")]
    UndefinedType,
    #[error("entry {position} is zero")]
    ZeroEntry { position: usize },
    #[error("entries {position} and {} have the same sign", position + 1)]
    NotAlternating { position: usize },
    #[error("entry {position} is out of range")]
    OutOfRange { position: usize },
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// An intermediate tuple that may contain zeros.
///
/// Zeros come from shortening a block of length one. They are removed by
/// [`RawTuple::normalize_signed`] or [`RawTuple::normalize_composition`]:
/// a zero at either end is dropped and an interior zero merges its two
/// neighbours into one block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawTuple(Vec<i64>);

impl RawTuple {
    pub fn new(entries: Vec<i64>) -> Self {
        RawTuple(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Whether the tuple, zeros included, equals its negated reverse.
    pub fn is_symmetric(&self) -> bool {
        self.0.iter().zip(self.0.iter().rev()).all(|(a, b)| *a == -*b)
    }

    fn reduced(&self) -> Result<Vec<i64>, TypeError> {
        let mut a = self.0.clone();
        loop {
            match a.as_slice() {
                [] | [0] => return Err(TypeError::UndefinedType),
                [_] => return Ok(a),
                [0, ..] => {
                    a.remove(0);
                }
                [.., 0] => {
                    a.pop();
                }
                _ => match a.iter().position(|&x| x == 0) {
                    Some(i) => {
                        let merged = a[i - 1] + a[i + 1];
                        a.splice(i - 1..=i + 1, [merged]);
                    }
                    None => return Ok(a),
                },
            }
        }
    }

    pub fn normalize_signed(&self) -> Result<SignedType, TypeError> {
        let reduced = self.reduced()?;
        let entries = reduced
            .iter()
            .enumerate()
            .map(|(position, &x)| i32::try_from(x).map_err(|_| TypeError::OutOfRange { position }))
            .collect::<Result<Vec<_>, _>>()?;
        SignedType::new(entries)
    }

    pub fn normalize_composition(&self) -> Result<Composition, TypeError> {
        let reduced = self.reduced()?;
        let entries = reduced
            .iter()
            .enumerate()
            .map(|(position, &x)| u32::try_from(x).map_err(|_| TypeError::OutOfRange { position }))
            .collect::<Result<Vec<_>, _>>()?;
        Composition::new(entries)
    }
}

impl From<&Composition> for RawTuple {
    fn from(c: &Composition) -> Self {
        RawTuple(c.0.iter().map(|&x| i64::from(x)).collect())
    }
}

impl From<&SignedType> for RawTuple {
    fn from(a: &SignedType) -> Self {
        RawTuple(a.0.iter().map(|&x| i64::from(x)).collect())
    }
}

/// Block lengths of a path type with the directions dropped.
///
/// Ordering is lexicographic on the entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(entries: Vec<u32>) -> Result<Self, TypeError> {
        if entries.is_empty() {
            return Err(TypeError::UndefinedType);
        }
        if let Some(position) = entries.iter().position(|&x| x == 0) {
            return Err(TypeError::ZeroEntry { position });
        }
        Ok(Composition(entries))
    }

    /// The composition with `len` ones.
    pub fn ones(len: usize) -> Self {
        assert!(len > 0, "empty composition");
        Composition(vec![1; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn reverse(&self) -> Self {
        Composition(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// The smaller of `self` and its reverse.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            self.clone()
        } else {
            self.reverse()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.0.iter().le(self.0.iter().rev())
    }

    /// All compositions obtained by shortening one block by one, in block
    /// order, with zeros reduced. A single block has no children.
    pub fn children(&self) -> Vec<Composition> {
        let a = &self.0;
        let s = a.len();
        if s == 1 {
            return Vec::new();
        }
        (0..s)
            .map(|i| {
                let mut child = Vec::with_capacity(s);
                if a[i] > 1 {
                    child.extend_from_slice(a);
                    child[i] -= 1;
                } else if i == 0 {
                    child.extend_from_slice(&a[1..]);
                } else if i == s - 1 {
                    child.extend_from_slice(&a[..s - 1]);
                } else {
                    child.extend_from_slice(&a[..i - 1]);
                    child.push(a[i - 1] + a[i + 1]);
                    child.extend_from_slice(&a[i + 2..]);
                }
                Composition(child)
            })
            .collect()
    }

    /// The signed type with these block lengths whose first block points
    /// forward when `forward_first` is set.
    pub fn lift(&self, forward_first: bool) -> SignedType {
        let mut sign = if forward_first { 1i64 } else { -1 };
        let entries = self
            .0
            .iter()
            .map(|&x| {
                let v = sign * i64::from(x);
                sign = -sign;
                i32::try_from(v).expect("block length exceeds i32")
            })
            .collect();
        SignedType(entries)
    }
}

impl TryFrom<Vec<u32>> for Composition {
    type Error = TypeError;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<u32> {
    fn from(c: Composition) -> Self {
        c.0
    }
}

/// Every composition of `total`, one per subset of the `total - 1` cut
/// points. Yields nothing for `total == 0`.
///
/// # Panics
///
/// Panics if `total > 64`.
pub fn compositions(total: u32) -> impl Iterator<Item = Composition> {
    assert!(total <= 64, "total {total} exceeds the 64-bit enumeration range");
    let cuts = total.saturating_sub(1);
    let count: u64 = if total == 0 { 0 } else { 1u64 << cuts };
    (0..count).map(move |mask| {
        let mut entries = Vec::with_capacity(mask.count_ones() as usize + 1);
        let mut run = 1u32;
        for bit in 0..cuts {
            if mask >> bit & 1 == 1 {
                entries.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        entries.push(run);
        Composition(entries)
    })
}

/// A signed path type: nonzero block lengths with alternating signs.
/// Positive entries are blocks directed along the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct SignedType(Vec<i32>);

impl SignedType {
    pub fn new(entries: Vec<i32>) -> Result<Self, TypeError> {
        if entries.is_empty() {
            return Err(TypeError::UndefinedType);
        }
        for (position, &x) in entries.iter().enumerate() {
            if x == 0 {
                return Err(TypeError::ZeroEntry { position });
            }
            if x == i32::MIN {
                return Err(TypeError::OutOfRange { position });
            }
        }
        if let Some(position) = entries
            .windows(2)
            .position(|w| (w[0] > 0) == (w[1] > 0))
        {
            return Err(TypeError::NotAlternating { position });
        }
        Ok(SignedType(entries))
    }

    /// Builds a type from a sign word: `true` where the arc points forward.
    pub fn from_signs(signs: &[bool]) -> Result<Self, TypeError> {
        let (&first, rest) = signs.split_first().ok_or(TypeError::UndefinedType)?;
        let mut entries = Vec::new();
        let mut current = first;
        let mut run = 1i32;
        for &s in rest {
            if s == current {
                run += 1;
            } else {
                entries.push(if current { run } else { -run });
                current = s;
                run = 1;
            }
        }
        entries.push(if current { run } else { -run });
        Ok(SignedType(entries))
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of arcs, i.e. the tournament order minus one for a Hamiltonian
    /// path.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|x| u64::from(x.unsigned_abs())).sum()
    }

    pub fn forward_first(&self) -> bool {
        self.0[0] > 0
    }

    pub fn reverse(&self) -> Self {
        SignedType(self.0.iter().rev().copied().collect())
    }

    pub fn negate(&self) -> Self {
        SignedType(self.0.iter().map(|x| -x).collect())
    }

    /// Type of the same paths read from the other end.
    pub fn opposite_reading(&self) -> Self {
        SignedType(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().zip(self.0.iter().rev()).all(|(a, b)| *a == -*b)
    }

    /// Whether `self` and `other` describe the same set of paths.
    pub fn same_path_set(&self, other: &SignedType) -> bool {
        self == other || *self == other.opposite_reading()
    }

    /// The lexicographically smaller of `self` and its opposite reading.
    pub fn canonical_key(&self) -> Self {
        let other = self.opposite_reading();
        if other < *self {
            other
        } else {
            self.clone()
        }
    }

    pub fn magnitudes(&self) -> Composition {
        Composition(self.0.iter().map(|x| x.unsigned_abs()).collect())
    }

    /// The tuple with block `i` moved one step toward zero, zeros kept.
    pub fn raw_child(&self, i: usize) -> RawTuple {
        let mut raw = RawTuple::from(self);
        raw.0[i] -= raw.0[i].signum();
        raw
    }

    /// All `s` children in block order after zero reduction.
    pub fn children(&self) -> Result<Vec<SignedType>, TypeError> {
        (0..self.len())
            .map(|i| self.raw_child(i).normalize_signed())
            .collect()
    }
}

impl TryFrom<Vec<i32>> for SignedType {
    type Error = TypeError;

    fn try_from(v: Vec<i32>) -> Result<Self, Self::Error> {
        SignedType::new(v)
    }
}

impl From<SignedType> for Vec<i32> {
    fn from(a: SignedType) -> Self {
        a.0
    }
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

impl fmt::Display for SignedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

fn parse_entries<T: FromStr>(input: &str) -> Result<Vec<T>, TypeError> {
    let fail = |reason: String| TypeError::Parse {
        input: input.to_string(),
        reason,
    };
    if input.trim().is_empty() {
        return Err(fail("empty tuple".into()));
    }
    input
        .split(',')
        .enumerate()
        .map(|(i, field)| {
            let field = field.trim();
            field
                .parse::<T>()
                .map_err(|_| fail(format!("entry {} ({field:?}) is not an integer in range", i + 1)))
        })
        .collect()
}

impl FromStr for Composition {
    type Err = TypeError;

    /// Parses `"1,2,1"`; a leading `+` on an entry is accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Composition::new(parse_entries(s)?)
    }
}

impl FromStr for SignedType {
    type Err = TypeError;

    /// Parses `"1,-2,1"`; a leading `+` on an entry is accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SignedType::new(parse_entries(s)?)
    }
}
