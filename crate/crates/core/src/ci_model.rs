//! Conditional independence statements over `n` variables, their enumeration,
//! and the action of the symmetric group by relabelling variables.
//!
//! Variables are numbered `1..=n`. Index sets are stored as bitmasks where
//! variable `i` occupies bit `i - 1`; the same layout indexes imset coordinates.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest number of variables supported anywhere in the crate.
pub const MAX_VARS: u8 = 9;

/// A variable label in `1..=n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex(u8);

impl VarIndex {
    pub fn new(value: u8, n: u8) -> Result<Self> {
        if value == 0 || value > n {
            return Err(Error::domain(format!("variable {value} outside 1..={n}")));
        }
        Ok(VarIndex(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// A subset of `[n]`, stored as a bitmask.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(u16);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u16) -> Self {
        IndexSet(bits)
    }

    pub fn singleton(i: u8) -> Self {
        debug_assert!((1..=16).contains(&i));
        IndexSet(1 << (i - 1))
    }

    pub fn from_indices(indices: &[u8]) -> Result<Self> {
        let mut bits = 0u16;
        for &i in indices {
            if i == 0 || i > MAX_VARS {
                return Err(Error::domain(format!("variable {i} outside 1..={MAX_VARS}")));
            }
            let b = 1u16 << (i - 1);
            if bits & b != 0 {
                return Err(Error::domain(format!("variable {i} repeated")));
            }
            bits |= b;
        }
        Ok(IndexSet(bits))
    }

    /// The full set `{1, ..., n}`.
    pub fn full(n: u8) -> Self {
        IndexSet(((1u32 << n) - 1) as u16)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: u8) -> bool {
        i >= 1 && i <= 16 && self.0 & (1 << (i - 1)) != 0
    }

    pub fn min(self) -> Option<u8> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as u8 + 1)
    }

    pub fn max(self) -> Option<u8> {
        (self.0 != 0).then(|| 16 - self.0.leading_zeros() as u8)
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        (1..=16u8).filter(move |&i| self.0 & (1 << (i - 1)) != 0)
    }

    pub fn to_vec(self) -> Vec<u8> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = IndexSet> {
        let full = self.0;
        let mut next = Some(0u16);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(IndexSet(cur))
        })
    }

    /// Digit string of the members ("" for the empty set).
    pub fn digits(self) -> String {
        self.iter().map(|i| char::from(b'0' + i)).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("e")
        } else {
            f.write_str(&self.digits())
        }
    }
}

/// Shape classes of the non-elementary statements for four variables.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StructuralType {
    /// `ij _||_ kl | e`
    TypeI,
    /// `ijk _||_ l | e`
    TypeII,
    /// `ij _||_ k | e`
    TypeIII,
    /// `ij _||_ k | l`
    TypeIV,
}

impl StructuralType {
    pub fn label(self) -> &'static str {
        match self {
            StructuralType::TypeI => "I",
            StructuralType::TypeII => "II",
            StructuralType::TypeIII => "III",
            StructuralType::TypeIV => "IV",
        }
    }

    /// Classifies a statement over four variables; `None` for elementary or
    /// other shapes.
    pub fn of(s: &CIStatement) -> Option<StructuralType> {
        if s.is_elementary() {
            return None;
        }
        let (a, b, k) = (s.left().len(), s.right().len(), s.cond().len());
        match (a + b, k) {
            (4, 0) if a == 2 && b == 2 => Some(StructuralType::TypeI),
            (4, 0) => Some(StructuralType::TypeII),
            (3, 0) => Some(StructuralType::TypeIII),
            (3, 1) => Some(StructuralType::TypeIV),
            _ => None,
        }
    }
}

/// A statement `I _||_ J | K` with pairwise disjoint `I`, `J`, `K` and
/// nonempty `I`, `J`. Always stored with `min(I) < min(J)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct CIStatement {
    left: IndexSet,
    right: IndexSet,
    cond: IndexSet,
}

impl CIStatement {
    pub fn new(left: IndexSet, right: IndexSet, cond: IndexSet) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::domain("both independent sets must be nonempty"));
        }
        if !left.is_disjoint(right) || !left.is_disjoint(cond) || !right.is_disjoint(cond) {
            return Err(Error::domain(format!(
                "sets {left}, {right}, {cond} are not pairwise disjoint"
            )));
        }
        let (left, right) = if left.min() < right.min() { (left, right) } else { (right, left) };
        Ok(CIStatement { left, right, cond })
    }

    /// Elementary statement `i _||_ j | K`.
    pub fn elementary(i: u8, j: u8, cond: IndexSet) -> Result<Self> {
        if i == j {
            return Err(Error::domain(format!("elementary statement needs i != j, got {i}")));
        }
        CIStatement::new(IndexSet::singleton(i), IndexSet::singleton(j), cond)
    }

    pub fn left(&self) -> IndexSet {
        self.left
    }

    pub fn right(&self) -> IndexSet {
        self.right
    }

    pub fn cond(&self) -> IndexSet {
        self.cond
    }

    pub fn is_elementary(&self) -> bool {
        self.left.len() == 1 && self.right.len() == 1
    }

    /// `I ∪ J ∪ K`.
    pub fn support(&self) -> IndexSet {
        self.left.union(self.right).union(self.cond)
    }

    /// Largest variable mentioned.
    pub fn max_var(&self) -> u8 {
        self.support().max().unwrap_or(0)
    }

    pub fn check_within(&self, n: u8) -> Result<()> {
        if self.max_var() > n {
            return Err(Error::domain(format!("statement {self} mentions a variable above n = {n}")));
        }
        Ok(())
    }

    fn sort_key(&self) -> (u8, u8, u16, u16, u16) {
        (
            self.left.min().unwrap_or(0),
            self.right.min().unwrap_or(0),
            self.cond.bits(),
            self.left.bits(),
            self.right.bits(),
        )
    }
}

impl Ord for CIStatement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for CIStatement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CIStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} _||_ {} | {}", self.left, self.right, self.cond)
    }
}

#[derive(Serialize, Deserialize)]
struct StatementJson {
    #[serde(rename = "I")]
    i: Vec<u8>,
    #[serde(rename = "J")]
    j: Vec<u8>,
    #[serde(rename = "K")]
    k: Vec<u8>,
}

impl Serialize for CIStatement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StatementJson { i: self.left.to_vec(), j: self.right.to_vec(), k: self.cond.to_vec() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CIStatement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = StatementJson::deserialize(d)?;
        let set = |v: &[u8]| IndexSet::from_indices(v).map_err(serde::de::Error::custom);
        CIStatement::new(set(&raw.i)?, set(&raw.j)?, set(&raw.k)?).map_err(serde::de::Error::custom)
    }
}

fn check_n(n: u8) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    if n > MAX_VARS {
        return Err(Error::domain(format!("n = {n} exceeds the supported maximum {MAX_VARS}")));
    }
    Ok(())
}

/// Number of elementary statements, `C(n,2) * 2^(n-2)`.
pub fn sigma(n: u8) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    let n = n as u64;
    Ok(n * (n - 1) / 2 * (1u64 << (n - 2)))
}

/// All elementary statements over `[n]`, sorted by `(i, j, K)`.
pub fn enumerate_elementary(n: u8) -> Result<Vec<CIStatement>> {
    check_n(n)?;
    let full = IndexSet::full(n);
    let mut out = Vec::with_capacity(sigma(n)? as usize);
    for i in 1..=n {
        for j in i + 1..=n {
            let rest = full.difference(IndexSet::singleton(i)).difference(IndexSet::singleton(j));
            for k in rest.subsets() {
                out.push(CIStatement::elementary(i, j, k)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// All non-elementary statements over `[n]` (n ∈ {3, 4}) that are sums of at
/// least two elementary imsets, with their four-variable type tag.
pub fn enumerate_structural(n: u8) -> Result<Vec<(CIStatement, Option<StructuralType>)>> {
    if n != 3 && n != 4 {
        return Err(Error::domain(format!("structural enumeration supports n = 3, 4; got {n}")));
    }
    let full = IndexSet::full(n);
    let mut found = BTreeSet::new();
    for left in full.subsets().filter(|s| !s.is_empty()) {
        for right in full.difference(left).subsets().filter(|s| !s.is_empty()) {
            for cond in full.difference(left).difference(right).subsets() {
                let s = CIStatement::new(left, right, cond)?;
                if !s.is_elementary() {
                    found.insert(s);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(found.len());
    for s in found {
        // Semi-elementary imsets split into |I|*|J| elementary terms.
        let bound = s.left().len() * s.right().len();
        if crate::imset::decompose_exists(&s, n, bound)? {
            let tag = if n == 4 { StructuralType::of(&s) } else { None };
            out.push((s, tag));
        }
    }
    Ok(out)
}

/// A bijection of `[n]`, stored as the images of `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

/// One-line notation: the images of 1..n.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.images.iter().map(u8::to_string).collect();
        write!(f, "[{}]", v.join(" "))
    }
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(Error::domain(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u8) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(n: u8, a: u8, b: u8) -> Result<Self> {
        let mut images: Vec<u8> = (1..=n).collect();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::domain(format!("transposition ({a} {b}) outside 1..={n}")));
        }
        images.swap(a as usize - 1, b as usize - 1);
        Ok(Permutation { images })
    }

    /// Every permutation of `[n]` in lexicographic order of image lists.
    pub fn all(n: u8) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=n).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1])
            else {
                break;
            };
            let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    pub fn n(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.images[i as usize - 1]
    }

    pub fn apply_set(&self, s: IndexSet) -> IndexSet {
        IndexSet(s.iter().fold(0u16, |acc, i| acc | 1 << (self.apply(i) - 1)))
    }

    /// `self ∘ h`: apply `h` first.
    pub fn compose(&self, h: &Permutation) -> Permutation {
        Permutation { images: h.images.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = i as u8 + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }
}

/// Relabels every index of `s` through `g` and re-canonicalizes.
pub fn apply_permutation(s: &CIStatement, g: &Permutation) -> Result<CIStatement> {
    s.check_within(g.n())?;
    CIStatement::new(g.apply_set(s.left), g.apply_set(s.right), g.apply_set(s.cond))
}

/// Splits `items` into orbits under the full symmetric group on `[n]`.
///
/// Every orbit is sorted, and orbits are ordered by their minimal member. The
/// action must map `items` into itself; the identity and composition laws are
/// spot-checked on the first few items.
pub fn orbit_partition<T, F>(items: &[T], n: u8, act: F) -> Result<Vec<Vec<T>>>
where
    T: Ord + Clone,
    F: Fn(&T, &Permutation) -> Result<T>,
{
    let group = Permutation::all(n);
    let universe: BTreeSet<T> = items.iter().cloned().collect();

    let id = Permutation::identity(n);
    for x in items.iter().take(4) {
        if act(x, &id)? != *x {
            return Err(Error::Internal("action does not fix items under the identity".into()));
        }
        for (g, h) in group.iter().zip(group.iter().rev()).take(6) {
            let lhs = act(x, &g.compose(h))?;
            let rhs = act(&act(x, h)?, g)?;
            if lhs != rhs {
                return Err(Error::Internal("action is not compatible with composition".into()));
            }
        }
    }

    let mut assigned: BTreeSet<T> = BTreeSet::new();
    let mut orbits = Vec::new();
    for x in &universe {
        if assigned.contains(x) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for g in &group {
            let y = act(x, g)?;
            if !universe.contains(&y) {
                return Err(Error::Internal("item set is not closed under the action".into()));
            }
            orbit.insert(y);
        }
        assigned.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect::<Vec<_>>());
    }
    orbits.sort_by(|a, b| a[0].cmp(&b[0]));
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(i: &[u8], j: &[u8], k: &[u8]) -> CIStatement {
        CIStatement::new(
            IndexSet::from_indices(i).unwrap(),
            IndexSet::from_indices(j).unwrap(),
            IndexSet::from_indices(k).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(2).unwrap(), 1);
        assert_eq!(sigma(3).unwrap(), 6);
        assert_eq!(sigma(4).unwrap(), 24);
        assert!(sigma(1).is_err());
    }

    #[test]
    fn elementary_n3_matches_enumeration() {
        let got = enumerate_elementary(3).unwrap();
        let want = vec![
            st(&[1], &[2], &[]),
            st(&[1], &[2], &[3]),
            st(&[1], &[3], &[]),
            st(&[1], &[3], &[2]),
            st(&[2], &[3], &[]),
            st(&[2], &[3], &[1]),
        ];
        assert_eq!(got, want);
        assert_eq!(enumerate_elementary(2).unwrap(), vec![st(&[1], &[2], &[])]);
        assert!(enumerate_elementary(1).is_err());
    }

    #[test]
    fn elementary_counts_up_to_six() {
        for n in 2..=6 {
            let v = enumerate_elementary(n).unwrap();
            assert_eq!(v.len() as u64, sigma(n).unwrap());
            let set: BTreeSet<_> = v.iter().collect();
            assert_eq!(set.len(), v.len());
            assert!(v.iter().all(|s| s.is_elementary()));
        }
    }

    #[test]
    fn canonical_orientation() {
        let s = st(&[2, 3], &[1], &[]);
        assert_eq!(s.left().to_vec(), vec![1]);
        assert_eq!(s.right().to_vec(), vec![2, 3]);
        assert!(CIStatement::new(IndexSet::EMPTY, IndexSet::singleton(1), IndexSet::EMPTY).is_err());
        assert!(CIStatement::new(IndexSet::singleton(1), IndexSet::singleton(1), IndexSet::EMPTY)
            .is_err());
    }

    #[test]
    fn structural_counts() {
        let s3 = enumerate_structural(3).unwrap();
        let got: Vec<_> = s3.iter().map(|(s, _)| *s).collect();
        let mut want = vec![st(&[1, 2], &[3], &[]), st(&[1, 3], &[2], &[]), st(&[1], &[2, 3], &[])];
        want.sort();
        assert_eq!(got, want);

        let s4 = enumerate_structural(4).unwrap();
        assert_eq!(s4.len(), 31);
        let count = |t| s4.iter().filter(|(_, x)| *x == Some(t)).count();
        assert_eq!(
            [count(StructuralType::TypeI), count(StructuralType::TypeII),
             count(StructuralType::TypeIII), count(StructuralType::TypeIV)],
            [3, 4, 12, 12]
        );
        let type_i: BTreeSet<_> = s4
            .iter()
            .filter(|(_, t)| *t == Some(StructuralType::TypeI))
            .map(|(s, _)| *s)
            .collect();
        let want_i: BTreeSet<_> =
            [st(&[1, 2], &[3, 4], &[]), st(&[1, 3], &[2, 4], &[]), st(&[1, 4], &[2, 3], &[])].into();
        assert_eq!(type_i, want_i);
        assert!(s4.iter().all(|(s, _)| !s.is_elementary()));
        assert!(enumerate_structural(5).is_err());
    }

    #[test]
    fn permutation_examples() {
        let s = st(&[1], &[2], &[3]);
        assert_eq!(apply_permutation(&s, &Permutation::identity(3)).unwrap(), s);
        let swap = Permutation::transposition(4, 1, 4).unwrap();
        assert_eq!(apply_permutation(&s, &swap).unwrap(), st(&[2], &[4], &[3]));

        let t = st(&[1, 2], &[3], &[]);
        let orbit: BTreeSet<_> =
            Permutation::all(3).iter().map(|g| apply_permutation(&t, g).unwrap()).collect();
        assert_eq!(orbit.len(), 3);
        assert_eq!(Permutation::all(4).len(), 24);
    }

    #[test]
    fn orbits_of_statements() {
        let e4 = enumerate_elementary(4).unwrap();
        let orbits = orbit_partition(&e4, 4, apply_permutation).unwrap();
        // marginal (K empty), |K| = 1, saturated (|K| = 2)
        let mut sizes: Vec<_> = orbits.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![6, 6, 12]);
        let single = orbit_partition(&[5u8], 3, |x, _| Ok(*x)).unwrap();
        assert_eq!(single, vec![vec![5]]);
    }

    #[test]
    fn orbit_rejects_non_closed_sets() {
        let s = vec![st(&[1], &[2], &[])];
        assert!(orbit_partition(&s, 3, apply_permutation).is_err());
    }

    #[test]
    fn json_shape() {
        let s = st(&[1], &[2, 3], &[4]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"I":[1],"J":[2,3],"K":[4]}"#);
        let back: CIStatement = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm(n: u8) -> impl Strategy<Value = Permutation> {
            let all = Permutation::all(n);
            (0..all.len()).prop_map(move |i| all[i].clone())
        }

        proptest! {
            #[test]
            fn action_composes(idx in 0usize..24, g in perm(4), h in perm(4)) {
                let s = enumerate_elementary(4).unwrap()[idx];
                let lhs = apply_permutation(&s, &g.compose(&h)).unwrap();
                let rhs = apply_permutation(&apply_permutation(&s, &h).unwrap(), &g).unwrap();
                prop_assert_eq!(lhs, rhs);
                let back = apply_permutation(&lhs, &g.compose(&h).inverse()).unwrap();
                prop_assert_eq!(back, s);
            }

            #[test]
            fn canonicalization_idempotent(idx in 0usize..80) {
                let s = enumerate_elementary(5).unwrap()[idx];
                let again = CIStatement::new(s.right(), s.left(), s.cond()).unwrap();
                prop_assert_eq!(again, s);
            }
        }
    }
}
