//! Brute-force path census on small tournaments.
//!
//! Every permutation of the vertices is a Hamiltonian oriented path read in
//! one direction. Its sign word (forward where `v_i` beats `v_{i+1}`) gives the
//! type, and the count for each path-set key is halved at the end because
//! every path is met once from each end. Nothing here depends on the
//! path-function, which makes the census an independent check of it.
//!
//! Vertices are `0..n` in the API; the text format labels them `1..=n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::Count;
use crate::types::SignedType;
use crate::BigCount;

/// Largest order [`Tournament::census`] accepts (10! = 3,628,800 permutations).
pub const DEFAULT_CENSUS_LIMIT: usize = 10;

/// Sign words are indexed by `u32` bitmasks, which bounds the order.
const MAX_CENSUS_ORDER: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("order {n} is below the minimum {min}")]
    InvalidOrder { n: usize, min: usize },
    #[error("order {n} exceeds the census limit {limit}")]
    OrderTooLarge { n: usize, limit: usize },
    #[error("type has {found} arcs but a Hamiltonian path on {n} vertices has {}", n - 1)]
    TypeOrderMismatch { n: usize, found: u64 },
    #[error("odd enumeration count for {key}: every path must be seen from both ends")]
    OddEnumeration { key: SignedType },
    #[error("tournament line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A complete orientation of `K_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    beats: Vec<bool>,
}

impl Tournament {
    fn empty(n: usize, min: usize) -> Result<Self, OracleError> {
        if n < min {
            return Err(OracleError::InvalidOrder { n, min });
        }
        Ok(Tournament {
            n,
            beats: vec![false; n * n],
        })
    }

    fn orient(&mut self, winner: usize, loser: usize) {
        self.beats[winner * self.n + loser] = true;
        self.beats[loser * self.n + winner] = false;
    }

    /// `i` beats `j` iff `i < j`.
    pub fn transitive(n: usize) -> Result<Self, OracleError> {
        let mut t = Self::empty(n, 2)?;
        for (i, j) in pairs(n) {
            t.orient(i, j);
        }
        Ok(t)
    }

    /// The transitive tournament with the arc between the ends of its
    /// directed Hamiltonian path reversed.
    pub fn nearly_transitive(n: usize) -> Result<Self, OracleError> {
        if n < 3 {
            return Err(OracleError::InvalidOrder { n, min: 3 });
        }
        let mut t = Self::transitive(n)?;
        t.orient(n - 1, 0);
        Ok(t)
    }

    /// Pair `k` (in lexicographic pair order) is oriented low-to-high when
    /// bit `k` of `bits` is clear.
    pub fn from_pair_bits(n: usize, bits: u64) -> Result<Self, OracleError> {
        let mut t = Self::empty(n, 2)?;
        for (k, (i, j)) in pairs(n).enumerate() {
            if bits >> k & 1 == 0 {
                t.orient(i, j);
            } else {
                t.orient(j, i);
            }
        }
        Ok(t)
    }

    /// Every labelled tournament of order `n` (2^(n(n-1)/2) of them).
    pub fn all_of_order(n: usize) -> Result<impl Iterator<Item = Tournament>, OracleError> {
        let n_pairs = n * n.saturating_sub(1) / 2;
        if n_pairs > 40 {
            return Err(OracleError::OrderTooLarge { n, limit: 9 });
        }
        Self::empty(n, 2)?;
        Ok((0..1u64 << n_pairs).map(move |bits| Self::from_pair_bits(n, bits).expect("valid order")))
    }

    /// Orients each pair, in lexicographic pair order, by one bit from a
    /// ChaCha8 stream seeded with `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self, OracleError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Self::empty(n, 2)?;
        for (i, j) in pairs(n) {
            if rng.gen::<bool>() {
                t.orient(i, j);
            } else {
                t.orient(j, i);
            }
        }
        Ok(t)
    }

    /// Every arc reversed.
    pub fn complement(&self) -> Self {
        let mut t = self.clone();
        for (i, j) in pairs(self.n) {
            if self.beats(i, j) {
                t.orient(j, i);
            } else {
                t.orient(i, j);
            }
        }
        t
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.beats[i * self.n + j]
    }

    /// Arcs as `(winner, loser)`, sorted.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs: Vec<_> = pairs(self.n)
            .map(|(i, j)| if self.beats(i, j) { (i, j) } else { (j, i) })
            .collect();
        arcs.sort_unstable();
        arcs
    }

    pub fn scores(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.beats(i, j)).count())
            .collect()
    }

    /// Census with the default order limit.
    pub fn census<C: Count>(&self) -> Result<TypeCensus<C>, OracleError> {
        self.census_with_limit(DEFAULT_CENSUS_LIMIT)
    }

    /// Counts every Hamiltonian oriented path by type.
    ///
    /// Permutations are split by their first vertex and enumerated
    /// lexicographically within each part; partial tallies are merged by
    /// addition, so the result does not depend on the thread count.
    pub fn census_with_limit<C: Count>(&self, limit: usize) -> Result<TypeCensus<C>, OracleError> {
        let n = self.n;
        if n > limit.min(MAX_CENSUS_ORDER) {
            return Err(OracleError::OrderTooLarge {
                n,
                limit: limit.min(MAX_CENSUS_ORDER),
            });
        }
        let words = 1usize << (n - 1);
        let tally = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut tally = vec![0u64; words];
                let rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
                for perm in rest.into_iter().permutations(n - 1) {
                    let mut prev = first;
                    let mut word = 0usize;
                    for (k, &v) in perm.iter().enumerate() {
                        if self.beats(prev, v) {
                            word |= 1 << k;
                        }
                        prev = v;
                    }
                    tally[word] += 1;
                }
                tally
            })
            .reduce(
                || vec![0u64; words],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );

        let mut doubled: BTreeMap<SignedType, u64> = BTreeMap::new();
        for (word, &count) in tally.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let signs: Vec<bool> = (0..n - 1).map(|k| word >> k & 1 == 1).collect();
            let ty = SignedType::from_signs(&signs).expect("n >= 2");
            *doubled.entry(ty.canonical_key()).or_default() += count;
        }
        let mut counts = BTreeMap::new();
        for (key, count) in doubled {
            if count % 2 != 0 {
                return Err(OracleError::OddEnumeration { key });
            }
            let halved = C::from_u64_exact(count / 2).expect("census counts fit every count type");
            counts.insert(key, halved);
        }
        Ok(TypeCensus { order: n, counts })
    }

    /// Number of Hamiltonian paths of type `a`.
    pub fn count_type<C: Count>(&self, a: &SignedType) -> Result<C, OracleError> {
        check_order(self.n, a)?;
        Ok(self.census::<C>()?.get(a))
    }

    /// Number of directed Hamiltonian paths.
    pub fn directed_paths<C: Count>(&self) -> Result<C, OracleError> {
        let ty = SignedType::new(vec![(self.n - 1) as i32]).expect("nonzero");
        self.count_type(&ty)
    }
}

fn check_order(n: usize, a: &SignedType) -> Result<(), OracleError> {
    if a.total() + 1 != n as u64 {
        return Err(OracleError::TypeOrderMismatch { n, found: a.total() });
    }
    Ok(())
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tournament")
            .field("n", &self.n)
            .field("arcs", &self.arcs())
            .finish()
    }
}

impl fmt::Display for Tournament {
    /// First line `n`, then one `i j` line per arc (`i` beats `j`), 1-based,
    /// in lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (i, j) in self.arcs() {
            writeln!(f, "{} {}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Tournament {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse = |line: usize, reason: String| OracleError::Parse { line, reason };
        let (first, header) = lines.next().ok_or_else(|| parse(1, "missing order".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| parse(first, format!("invalid order {header:?}")))?;
        let mut t = Self::empty(n, 2)?;
        let mut seen = vec![false; n * n];
        let mut arcs = 0;
        for (line, text) in lines {
            let fields: Vec<&str> = text.split_whitespace().collect();
            let [a, b] = fields.as_slice() else {
                return Err(parse(line, format!("expected two vertices, got {text:?}")));
            };
            let vertex = |v: &str| {
                v.parse::<usize>()
                    .ok()
                    .filter(|&v| (1..=n).contains(&v))
                    .map(|v| v - 1)
                    .ok_or_else(|| parse(line, format!("invalid vertex {v:?}")))
            };
            let (i, j) = (vertex(a)?, vertex(b)?);
            if i == j {
                return Err(parse(line, "loop".into()));
            }
            let (lo, hi) = (i.min(j), i.max(j));
            if seen[lo * n + hi] {
                return Err(parse(line, format!("pair {} {} given twice", lo + 1, hi + 1)));
            }
            seen[lo * n + hi] = true;
            t.orient(i, j);
            arcs += 1;
        }
        if arcs != n * (n - 1) / 2 {
            return Err(parse(
                0,
                format!("expected {} arcs, found {arcs}", n * (n - 1) / 2),
            ));
        }
        Ok(t)
    }
}

/// Number of Hamiltonian paths per path-set key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCensus<C: Count = BigCount> {
    pub order: usize,
    #[serde(with = "census_counts")]
    pub counts: BTreeMap<SignedType, C>,
}

impl<C: Count> TypeCensus<C> {
    /// Count for the path set of `a`; zero if no path has that type.
    pub fn get(&self, a: &SignedType) -> C {
        self.counts
            .get(&a.canonical_key())
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn total(&self) -> C {
        self.counts
            .values()
            .fold(C::zero(), |acc, v| acc + v.clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SignedType, &C)> {
        self.counts.iter()
    }
}

mod census_counts {
    use std::collections::BTreeMap;

    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::count::{decimal, Count};
    use crate::types::SignedType;

    #[derive(Serialize, Deserialize)]
    #[serde(bound = "")]
    struct Entry<C: Count> {
        #[serde(rename = "type")]
        ty: SignedType,
        #[serde(with = "decimal")]
        count: C,
    }

    pub fn serialize<C: Count, S: Serializer>(
        m: &BTreeMap<SignedType, C>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for (k, v) in m {
            seq.serialize_element(&Entry {
                ty: k.clone(),
                count: v.clone(),
            })?;
        }
        seq.end()
    }

    pub fn deserialize<'de, C: Count, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<SignedType, C>, D::Error> {
        let entries = Vec::<Entry<C>>::deserialize(d)?;
        Ok(entries.into_iter().map(|e| (e.ty, e.count)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed(v: &[i32]) -> SignedType {
        SignedType::new(v.to_vec()).unwrap()
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn transitive_arcs() {
        let t = Tournament::transitive(3).unwrap();
        assert_eq!(t.arcs(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(Tournament::transitive(2).unwrap().arcs(), vec![(0, 1)]);
        assert_eq!(
            Tournament::transitive(1),
            Err(OracleError::InvalidOrder { n: 1, min: 2 })
        );
        assert_eq!(
            Tournament::nearly_transitive(2),
            Err(OracleError::InvalidOrder { n: 2, min: 3 })
        );
    }

    #[test]
    fn transitive_census_order_three() {
        let c: TypeCensus<u64> = Tournament::transitive(3).unwrap().census().unwrap();
        let expected: BTreeMap<_, _> = [
            (signed(&[2]).canonical_key(), 1),
            (signed(&[1, -1]), 1),
            (signed(&[-1, 1]), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(c.counts, expected);
    }

    #[test]
    fn transitive_counts() {
        let t4 = Tournament::transitive(4).unwrap();
        assert_eq!(t4.census::<u64>().unwrap().total(), 12);
        assert_eq!(t4.directed_paths::<u64>().unwrap(), 1);
        assert_eq!(t4.count_type::<u64>(&signed(&[2, -1])).unwrap(), 3);
        let t5 = Tournament::transitive(5).unwrap();
        assert_eq!(t5.count_type::<u64>(&signed(&[2, -2])).unwrap(), 3);
        for n in 3..=8 {
            let t = Tournament::transitive(n).unwrap();
            assert_eq!(t.directed_paths::<u64>().unwrap(), 1, "n={n}");
        }
    }

    #[test]
    fn nearly_transitive_directed_paths() {
        assert_eq!(
            Tournament::nearly_transitive(3).unwrap().directed_paths::<u64>().unwrap(),
            3
        );
        assert_eq!(
            Tournament::nearly_transitive(4).unwrap().directed_paths::<u64>().unwrap(),
            5
        );
        assert_eq!(
            Tournament::nearly_transitive(5).unwrap().directed_paths::<u64>().unwrap(),
            9
        );
        assert_eq!(
            Tournament::nearly_transitive(6).unwrap().directed_paths::<u64>().unwrap(),
            17
        );
    }

    #[test]
    fn type_order_mismatch() {
        let t = Tournament::transitive(4).unwrap();
        assert_eq!(
            t.count_type::<u64>(&signed(&[1, -1])),
            Err(OracleError::TypeOrderMismatch { n: 4, found: 2 })
        );
    }

    #[test]
    fn census_limit() {
        let t = Tournament::transitive(6).unwrap();
        assert_eq!(
            t.census_with_limit::<u64>(5),
            Err(OracleError::OrderTooLarge { n: 6, limit: 5 })
        );
    }

    #[test]
    fn partition_and_key_invariants() {
        for n in 2..=8 {
            for t in [
                Tournament::transitive(n).unwrap(),
                Tournament::random(n, n as u64).unwrap(),
            ] {
                let c: TypeCensus<u64> = t.census().unwrap();
                assert_eq!(c.total(), factorial(n as u64) / 2, "n={n}");
                for k in c.counts.keys() {
                    assert_eq!(k, &k.canonical_key());
                    assert_eq!(k.total() + 1, n as u64);
                }
            }
        }
    }

    #[test]
    fn complement_properties() {
        let t = Tournament::random(7, 3).unwrap();
        assert_eq!(t.complement().complement(), t);
        let cycle = Tournament::nearly_transitive(3).unwrap();
        let co = cycle.complement();
        assert_eq!(co.scores(), vec![1, 1, 1]);
        // Complement of a transitive tournament is transitive up to relabelling.
        let mut scores = Tournament::transitive(6).unwrap().complement().scores();
        scores.sort_unstable();
        assert_eq!(scores, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(Tournament::random(9, 42).unwrap(), Tournament::random(9, 42).unwrap());
        let t = Tournament::random(9, 7).unwrap();
        for i in 0..9 {
            assert!(!t.beats(i, i));
            for j in 0..9 {
                if i != j {
                    assert_ne!(t.beats(i, j), t.beats(j, i));
                }
            }
        }
    }

    #[test]
    fn exhaustive_small_orders() {
        assert_eq!(Tournament::all_of_order(4).unwrap().count(), 64);
        let distinct: std::collections::HashSet<_> = Tournament::all_of_order(4).unwrap().collect();
        assert_eq!(distinct.len(), 64);
    }

    #[test]
    fn text_format() {
        let t = Tournament::nearly_transitive(3).unwrap();
        let text = t.to_string();
        assert_eq!(text, "3\n1 2\n2 3\n3 1\n");
        assert_eq!(text.parse::<Tournament>().unwrap(), t);
        let r = Tournament::random(8, 11).unwrap();
        assert_eq!(r.to_string().parse::<Tournament>().unwrap(), r);

        assert!(matches!("3\n1 2\n".parse::<Tournament>(), Err(OracleError::Parse { .. })));
        assert!(matches!(
            "3\n1 2\n2 1\n1 3\n".parse::<Tournament>(),
            Err(OracleError::Parse { line: 3, .. })
        ));
        assert!(matches!("2\n1 4\n".parse::<Tournament>(), Err(OracleError::Parse { line: 2, .. })));
    }

    #[test]
    fn census_json_round_trip() {
        let c: TypeCensus<BigCount> = Tournament::random(6, 5).unwrap().census().unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"count\":\""));
        let back: TypeCensus<BigCount> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
