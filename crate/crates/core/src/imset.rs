//! The imset map: statements to integer vectors on the power set of `[n]`,
//! the matrix of all elementary imsets, recognition of semi-elementary
//! imsets, decomposition into elementary terms, and relation verification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::ci_model::{enumerate_elementary, CIStatement, IndexSet, MAX_VARS};
use crate::error::{Error, Result};
use crate::linalg;
use crate::relation_lang::{BinomialExpr, CIRelation, RelationSide};

/// An integer vector indexed by the subsets of `[n]`; coordinate `S` lives
/// at position `Σ_{i∈S} 2^(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Imset {
    n: u8,
    coeffs: Vec<i64>,
}

impl Imset {
    pub fn zero(n: u8) -> Self {
        Imset { n, coeffs: vec![0; 1 << n] }
    }

    pub fn from_coeffs(n: u8, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != 1usize << n {
            return Err(Error::domain(format!(
                "imset over n = {n} needs {} coordinates, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(Imset { n, coeffs })
    }

    /// Builds an imset from the JSON map form (`{"13": -1, "": 1}`).
    pub fn from_json_map(n: u8, map: &BTreeMap<String, i64>) -> Result<Self> {
        let mut u = Imset::zero(n);
        for (key, &v) in map {
            let digits: Vec<u8> = key
                .bytes()
                .map(|b| {
                    if b.is_ascii_digit() && b != b'0' {
                        Ok(b - b'0')
                    } else {
                        Err(Error::domain(format!("bad subset key {key:?}")))
                    }
                })
                .collect::<Result<_>>()?;
            if digits.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::domain(format!("subset key {key:?} is not sorted")));
            }
            let set = IndexSet::from_indices(&digits)?;
            if set.max().unwrap_or(0) > n {
                return Err(Error::domain(format!("subset key {key:?} exceeds n = {n}")));
            }
            u.coeffs[set.bits() as usize] = v;
        }
        Ok(u)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn get(&self, s: IndexSet) -> i64 {
        self.coeffs[s.bits() as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add_assign(&mut self, other: &Imset) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &Imset) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    /// Nonzero coordinates as `(subset, coefficient)`, in bitmask order.
    pub fn support(&self) -> impl Iterator<Item = (IndexSet, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (IndexSet::from_bits(i as u16), c))
    }

    /// The JSON map form: sorted-digit subset keys to nonzero coefficients.
    pub fn to_json_map(&self) -> BTreeMap<String, i64> {
        self.support().map(|(s, c)| (s.digits(), c)).collect()
    }
}

impl Serialize for Imset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_map().serialize(s)
    }
}

impl fmt::Display for Imset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support()
            .map(|(s, c)| {
                let key = if s.is_empty() { "e".to_string() } else { s.digits() };
                format!("{c:+}*{key}")
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

fn check_n(n: u8) -> Result<()> {
    if !(2..=MAX_VARS).contains(&n) {
        return Err(Error::domain(format!("n must lie in 2..={MAX_VARS}, got {n}")));
    }
    Ok(())
}

/// `e_{IJK} + e_K - e_{IK} - e_{JK}` for any statement.
pub fn semi_elementary_imset(s: &CIStatement, n: u8) -> Result<Imset> {
    check_n(n)?;
    s.check_within(n)?;
    let mut u = Imset::zero(n);
    let k = s.cond();
    u.coeffs[s.support().bits() as usize] += 1;
    u.coeffs[k.bits() as usize] += 1;
    u.coeffs[s.left().union(k).bits() as usize] -= 1;
    u.coeffs[s.right().union(k).bits() as usize] -= 1;
    Ok(u)
}

/// The imset `e_{ijK} + e_K - e_{iK} - e_{jK}` of an elementary statement.
pub fn elementary_imset(s: &CIStatement, n: u8) -> Result<Imset> {
    if !s.is_elementary() {
        return Err(Error::domain(format!("{s} is not elementary")));
    }
    semi_elementary_imset(s, n)
}

/// Finds the statement whose semi-elementary imset equals `u`, if any.
pub fn recognize_semi_elementary(u: &Imset) -> Option<CIStatement> {
    let supp: Vec<(IndexSet, i64)> = u.support().collect();
    if supp.len() != 4 {
        return None;
    }
    let plus: Vec<IndexSet> = supp.iter().filter(|(_, c)| *c == 1).map(|(s, _)| *s).collect();
    let minus: Vec<IndexSet> = supp.iter().filter(|(_, c)| *c == -1).map(|(s, _)| *s).collect();
    if plus.len() != 2 || minus.len() != 2 {
        return None;
    }
    let (bottom, top) = if plus[0].is_subset(plus[1]) {
        (plus[0], plus[1])
    } else if plus[1].is_subset(plus[0]) {
        (plus[1], plus[0])
    } else {
        return None;
    };
    let (x, y) = (minus[0], minus[1]);
    if x.union(y) != top || x.intersection(y) != bottom {
        return None;
    }
    let s = CIStatement::new(x.difference(bottom), y.difference(bottom), bottom).ok()?;
    (semi_elementary_imset(&s, u.n()).ok()? == *u).then_some(s)
}

/// The matrix whose columns are the elementary imsets, in canonical order.
#[derive(Clone, Debug)]
pub struct ImsetMatrix {
    n: u8,
    columns: Vec<(CIStatement, Imset)>,
}

impl ImsetMatrix {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn columns(&self) -> &[(CIStatement, Imset)] {
        &self.columns
    }

    pub fn statements(&self) -> Vec<CIStatement> {
        self.columns.iter().map(|(s, _)| *s).collect()
    }

    pub fn num_rows(&self) -> usize {
        1 << self.n
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }

    /// Position of an elementary statement among the columns.
    pub fn column_of(&self, s: &CIStatement) -> Option<usize> {
        self.columns.binary_search_by(|(t, _)| t.cmp(s)).ok()
    }

    /// Row-major `2^n × σ_n` entries.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.num_rows())
            .map(|r| self.columns.iter().map(|(_, u)| u.coeffs[r]).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows())
    }

    /// `A · x` for an integer vector over the columns.
    pub fn apply(&self, x: &[i64]) -> Imset {
        let mut out = Imset::zero(self.n);
        for ((_, u), &c) in self.columns.iter().zip(x) {
            if c != 0 {
                for (o, v) in out.coeffs.iter_mut().zip(&u.coeffs) {
                    *o += c * v;
                }
            }
        }
        out
    }

    /// CSV export: a header of statements, then one row per subset in
    /// bitmask order led by the subset key.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("subset");
        for (st, _) in &self.columns {
            s.push(',');
            s.push_str(&st.to_string());
        }
        s.push('\n');
        for (r, row) in self.rows().iter().enumerate() {
            let key = IndexSet::from_bits(r as u16);
            s.push_str(if key.is_empty() { "e" } else { "" });
            s.push_str(&key.digits());
            for v in row {
                s.push(',');
                s.push_str(&v.to_string());
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "rows": (0..self.num_rows()).map(|r| IndexSet::from_bits(r as u16).digits()).collect::<Vec<_>>(),
            "columns": self.columns.iter().map(|(s, _)| s).collect::<Vec<_>>(),
            "matrix": self.rows(),
        })
    }
}

pub fn build_matrix(n: u8) -> Result<ImsetMatrix> {
    check_n(n)?;
    let columns = enumerate_elementary(n)?
        .into_iter()
        .map(|s| elementary_imset(&s, n).map(|u| (s, u)))
        .collect::<Result<_>>()?;
    Ok(ImsetMatrix { n, columns })
}

/// Coordinatewise sum of the imsets of a formal sum of statements.
pub fn sum_imsets(side: &RelationSide, n: u8) -> Result<Imset> {
    let mut u = Imset::zero(n);
    for s in side.terms() {
        u.add_assign(&semi_elementary_imset(s, n)?);
    }
    Ok(u)
}

/// Outcome of checking a multi-sided relation under the imset map.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: u8,
    pub side_imsets: Vec<Imset>,
    /// `sides_equal[a][b]` is true iff sides `a` and `b` have equal imsets.
    pub sides_equal: Vec<Vec<bool>>,
    pub recognized: Option<CIStatement>,
    pub declared: Option<CIStatement>,
    pub target_matches: Option<bool>,
    pub valid: bool,
}

impl VerificationReport {
    pub fn all_sides_equal(&self) -> bool {
        self.sides_equal.iter().all(|row| row.iter().all(|&b| b))
    }
}

pub fn verify_relation(r: &CIRelation, n: u8) -> Result<VerificationReport> {
    let side_imsets: Vec<Imset> =
        r.sides().iter().map(|s| sum_imsets(s, n)).collect::<Result<_>>()?;
    let sides_equal: Vec<Vec<bool>> = side_imsets
        .iter()
        .map(|a| side_imsets.iter().map(|b| a == b).collect())
        .collect();
    let all_equal = sides_equal.iter().all(|row| row.iter().all(|&b| b));
    let recognized = recognize_semi_elementary(&side_imsets[0]);
    let declared = r.target();
    if let Some(t) = declared {
        t.check_within(n)?;
    }
    let target_matches = declared.map(|t| all_equal && recognized == Some(t));
    let valid = all_equal && target_matches.unwrap_or(true);
    Ok(VerificationReport { n, side_imsets, sides_equal, recognized, declared, target_matches, valid })
}

/// A multiset of elementary statements whose imsets sum to the target's.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Decomposition {
    pub target: CIStatement,
    /// Sorted; repetitions allowed.
    pub parts: Vec<CIStatement>,
}

struct DecomposeSearch<'a> {
    cols: &'a [(CIStatement, Imset)],
    found: BTreeSet<Vec<usize>>,
    stop_at_first: bool,
}

impl DecomposeSearch<'_> {
    fn run(&mut self, residual: &mut Vec<i64>, chosen: &mut Vec<usize>, left: usize) {
        if self.stop_at_first && !self.found.is_empty() {
            return;
        }
        // coordinate of largest magnitude drives the branching
        let mut pos = None;
        let mut mag = 0;
        let mut l1 = 0;
        for (i, &v) in residual.iter().enumerate() {
            l1 += v.abs();
            if v.abs() > mag {
                mag = v.abs();
                pos = Some(i);
            }
        }
        let Some(pos) = pos else {
            let mut key = chosen.clone();
            key.sort_unstable();
            self.found.insert(key);
            return;
        };
        // each elementary imset has four ±1 entries
        if left == 0 || mag > left as i64 || l1 > 4 * left as i64 {
            return;
        }
        let sign = residual[pos].signum();
        for (c, (_, u)) in self.cols.iter().enumerate() {
            if u.coeffs[pos] != sign {
                continue;
            }
            for (r, v) in residual.iter_mut().zip(&u.coeffs) {
                *r -= v;
            }
            chosen.push(c);
            self.run(residual, chosen, left - 1);
            chosen.pop();
            for (r, v) in residual.iter_mut().zip(&u.coeffs) {
                *r += v;
            }
        }
    }
}

fn decompose_impl(target: &CIStatement, n: u8, max_terms: usize, first: bool) -> Result<Vec<Decomposition>> {
    if target.is_elementary() {
        return Err(Error::domain(format!("{target} is elementary; nothing to decompose")));
    }
    if max_terms < 2 {
        return Err(Error::domain("max_terms must be at least 2"));
    }
    let matrix = build_matrix(n)?;
    let mut residual = semi_elementary_imset(target, n)?.coeffs;
    let mut search = DecomposeSearch { cols: &matrix.columns, found: BTreeSet::new(), stop_at_first: first };
    search.run(&mut residual, &mut Vec::new(), max_terms);
    Ok(search
        .found
        .into_iter()
        .map(|idx| Decomposition { target: *target, parts: idx.into_iter().map(|i| matrix.columns[i].0).collect() })
        .collect())
}

/// Every multiset of at most `max_terms` elementary statements whose imset
/// sum equals the semi-elementary imset of `target`, in sorted order.
pub fn decompose(target: &CIStatement, n: u8, max_terms: usize) -> Result<Vec<Decomposition>> {
    decompose_impl(target, n, max_terms, false)
}

pub(crate) fn decompose_exists(target: &CIStatement, n: u8, max_terms: usize) -> Result<bool> {
    Ok(!decompose_impl(target, n, max_terms.max(2), true)?.is_empty())
}

/// Extends a quadratic binomial to the three-sided relation naming the
/// statement whose imset both monomials represent.
pub fn extend_quadratic_binomial(b: &BinomialExpr, n: u8) -> Result<Option<CIRelation>> {
    if b.plus().len() != 2 || b.minus().len() != 2 {
        return Err(Error::domain("binomial is not quadratic"));
    }
    let plus = RelationSide::new(b.plus().to_vec())?;
    let minus = RelationSide::new(b.minus().to_vec())?;
    let (u, v) = (sum_imsets(&plus, n)?, sum_imsets(&minus, n)?);
    if u != v {
        return Ok(None);
    }
    let Some(target) = recognize_semi_elementary(&u) else { return Ok(None) };
    Ok(Some(CIRelation::new(vec![plus, minus], Some(target))?))
}
