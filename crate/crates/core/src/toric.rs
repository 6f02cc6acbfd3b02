//! The toric ideal of the elementary imset matrix: integer kernel, Markov
//! basis (minimal binomial generators) and Graver basis (primitive moves).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::ci_model::{apply_permutation, orbit_partition, CIStatement, Permutation};
use crate::error::{Error, Result};
use crate::imset::{extend_quadratic_binomial, ImsetMatrix};
use crate::linalg::{identity_on_free_coordinates, integer_kernel};
use crate::poly::{saturate_variable, saturate_variable_homogeneous, IdealHandle, MonomialOrder, Polynomial, Ring};
use crate::relation_lang::{BinomialExpr, CIRelation};

/// `x^{v⁺} − x^{v⁻}` for a kernel vector `v`, stored with its first nonzero
/// coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToricBinomial {
    vector: Vec<i64>,
}

impl ToricBinomial {
    pub fn new(mut vector: Vec<i64>) -> Result<Self> {
        match vector.iter().find(|&&x| x != 0) {
            None => Err(Error::domain("zero vector has no binomial")),
            Some(&x) => {
                if x < 0 {
                    vector.iter_mut().for_each(|c| *c = -*c);
                }
                Ok(ToricBinomial { vector })
            }
        }
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    pub fn plus(&self) -> Vec<u32> {
        self.vector.iter().map(|&x| x.max(0) as u32).collect()
    }

    pub fn minus(&self) -> Vec<u32> {
        self.vector.iter().map(|&x| (-x).max(0) as u32).collect()
    }

    pub fn plus_degree(&self) -> u32 {
        self.plus().iter().sum()
    }

    pub fn minus_degree(&self) -> u32 {
        self.minus().iter().sum()
    }

    /// Total degree `max(deg x⁺, deg x⁻)`.
    pub fn degree(&self) -> u32 {
        self.plus_degree().max(self.minus_degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.vector.iter().sum::<i64>() == 0
    }

    pub fn is_multilinear(&self) -> bool {
        self.vector.iter().all(|x| x.abs() <= 1)
    }

    fn sort_key(&self) -> (u32, Vec<u32>, Vec<u32>) {
        (self.degree(), self.plus(), self.minus())
    }

    /// The binomial as statement multisets over the matrix columns.
    pub fn to_expr(&self, statements: &[CIStatement]) -> Result<BinomialExpr> {
        let side = |exps: Vec<u32>| -> Vec<CIStatement> {
            exps.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat(statements[i]).take(e as usize)).collect()
        };
        BinomialExpr::new(side(self.plus()), side(self.minus()))
    }

    pub fn to_polynomial(&self, ring: &Ring) -> Polynomial {
        let e = |v: Vec<u32>| v.into_iter().map(|x| x as u16).collect();
        Polynomial::binomial(e(self.plus()), e(self.minus()), ring)
    }

    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let t = p.terms();
        if t.len() != 2 || t[0].1 != -t[1].1.clone() {
            return Err(Error::domain("polynomial is not a pure-difference binomial"));
        }
        let v = t[0].0.exps().iter().zip(t[1].0.exps()).map(|(&a, &b)| a as i64 - b as i64).collect();
        ToricBinomial::new(v)
    }

    pub fn render(&self, statements: &[CIStatement]) -> String {
        self.to_expr(statements).map(|e| e.to_string()).unwrap_or_else(|_| format!("{:?}", self.vector))
    }
}

impl fmt::Display for ToricBinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vector)
    }
}

/// Sorts into canonical order: total degree, then exponent vectors.
pub fn canonical_order(v: &mut Vec<ToricBinomial>) {
    v.sort_by_cached_key(ToricBinomial::sort_key);
    v.dedup();
}

/// ℤ-basis of `ker_ℤ 𝒜ₙ`.
pub fn kernel_basis(a: &ImsetMatrix) -> Vec<Vec<i64>> {
    integer_kernel(&a.rows())
}

pub fn in_kernel(a: &ImsetMatrix, v: &[i64]) -> bool {
    a.apply(v).is_zero()
}

/// Variable name of an elementary statement in ℚ[ℰₙ], e.g. `x1_2_34`, `x1_2_e`.
pub fn statement_variable(s: &CIStatement) -> String {
    let k = if s.cond().is_empty() { "e".to_string() } else { s.cond().digits() };
    format!("x{}_{}_{}", s.left().digits(), s.right().digits(), k)
}

pub fn toric_ring(a: &ImsetMatrix, order: MonomialOrder) -> Arc<Ring> {
    Ring::new(a.statements().iter().map(statement_variable).collect(), order).expect("valid names")
}

/// How `markov_basis` computes `(I : v^∞)` for each variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Saturation {
    /// Adjoin `t·v − 1` and eliminate `t` (one block-order basis per variable).
    Elimination,
    /// Grevlex basis with `v` last, divided by powers of `v` (homogeneous ideals).
    Homogeneous,
}

/// Minimal binomial generating set of `I_𝒜`, in canonical order.
pub fn markov_basis(a: &ImsetMatrix, budget: &Budget) -> Result<Vec<ToricBinomial>> {
    markov_basis_with(a, Saturation::Homogeneous, budget)
}

pub fn markov_basis_with(a: &ImsetMatrix, method: Saturation, budget: &Budget) -> Result<Vec<ToricBinomial>> {
    let ideal = toric_ideal(a, method, budget)?;
    let mut cands: Vec<ToricBinomial> =
        ideal.generators().iter().map(ToricBinomial::from_polynomial).collect::<Result<_>>()?;
    canonical_order(&mut cands);
    let kept = minimalize_by_fibers(&cands, budget)?;
    Ok(kept)
}

/// `I_𝒜` as the lattice-basis ideal saturated by every variable in turn.
pub fn toric_ideal(a: &ImsetMatrix, method: Saturation, budget: &Budget) -> Result<IdealHandle> {
    let ring = toric_ring(a, MonomialOrder::GrevLex);
    let gens: Vec<Polynomial> = kernel_basis(a)
        .into_iter()
        .map(|v| ToricBinomial::new(v).map(|b| b.to_polynomial(&ring)))
        .collect::<Result<_>>()?;
    let mut ideal = IdealHandle::new(ring.clone(), gens)?;
    for v in 0..ring.nvars() {
        budget.check("markov saturation")?;
        ideal = match method {
            Saturation::Elimination => saturate_variable(&ideal, v, budget)?,
            Saturation::Homogeneous => saturate_variable_homogeneous(&ideal, v, budget)?,
        };
    }
    Ok(ideal)
}

/// Keeps, in the given order, each binomial whose two monomials are not yet
/// connected in their fiber by the moves kept so far. For generators sorted
/// by degree this is a minimal generating set (graded Nakayama).
pub fn minimalize_by_fibers(cands: &[ToricBinomial], budget: &Budget) -> Result<Vec<ToricBinomial>> {
    let mut kept: Vec<ToricBinomial> = Vec::new();
    for c in cands {
        budget.check("markov minimalization")?;
        if !connected(&c.plus(), &c.minus(), &kept) {
            kept.push(c.clone());
        }
    }
    Ok(kept)
}

/// Whether `x^u − x^w` lies in the ideal generated by `moves`, decided by a
/// breadth-first search through the (finite) fiber of `u`.
pub fn connected(u: &[u32], w: &[u32], moves: &[ToricBinomial]) -> bool {
    let deg: u32 = u.iter().sum();
    let steps: Vec<(Vec<u32>, Vec<u32>)> = moves
        .iter()
        .filter(|m| m.degree() <= deg)
        .flat_map(|m| [(m.plus(), m.minus()), (m.minus(), m.plus())])
        .collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.to_vec());
    queue.push_back(u.to_vec());
    while let Some(s) = queue.pop_front() {
        if s == w {
            return true;
        }
        for (from, to) in &steps {
            if from.iter().zip(&s).all(|(a, b)| a <= b) {
                let next: Vec<u32> = s.iter().zip(from).zip(to).map(|((x, a), b)| x - a + b).collect();
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    false
}

#[derive(Clone)]
struct Move {
    v: Vec<i32>,
    pos: u64,
    neg: u64,
}

impl Move {
    fn new(v: Vec<i32>) -> Self {
        let (mut pos, mut neg) = (0u64, 0u64);
        for (i, &x) in v.iter().enumerate() {
            if x > 0 {
                pos |= 1 << i;
            } else if x < 0 {
                neg |= 1 << i;
            }
        }
        Move { v, pos, neg }
    }

    fn neg(&self) -> Move {
        Move { v: self.v.iter().map(|x| -x).collect(), pos: self.neg, neg: self.pos }
    }

    /// `self ⊑ s` on the coordinates in `mask`.
    fn conformal_le(&self, s: &Move, mask: u64) -> bool {
        let (p, n) = (self.pos & mask, self.neg & mask);
        if p & !s.pos != 0 || n & !s.neg != 0 {
            return false;
        }
        let bits = p | n;
        let mut b = bits;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            if self.v[i].abs() > s.v[i].abs() {
                return false;
            }
            b &= b - 1;
        }
        true
    }
}

fn reduce(mut s: Move, g: &[Move], mask: u64) -> Option<Move> {
    'outer: loop {
        if (s.pos | s.neg) & mask == 0 {
            return None;
        }
        for h in g {
            if h.conformal_le(&s, mask) {
                let v: Vec<i32> = s.v.iter().zip(&h.v).map(|(a, b)| a - b).collect();
                s = Move::new(v);
                continue 'outer;
            }
        }
        return Some(s);
    }
}

/// Keeps the `⊑`-minimal elements on `mask` (the Graver basis of the projection).
fn minimal_elements(g: Vec<Move>, mask: u64) -> Vec<Move> {
    use rayon::prelude::*;
    let keep: Vec<bool> = (0..g.len())
        .into_par_iter()
        .map(|i| !g.iter().enumerate().any(|(j, h)| j != i && h.conformal_le(&g[i], mask)))
        .collect();
    g.into_iter().zip(keep).filter(|(_, k)| *k).map(|(m, _)| m).collect()
}

/// Graver basis of `ker_ℤ 𝒜ₙ` by project-and-lift: start from a lattice
/// basis that is the identity on coordinates `τ` (whose projection has the
/// unit vectors as Graver basis) and add one coordinate at a time, completing
/// with sums of pairs that are sign-compatible on the previous coordinates and
/// of opposite sign on the new one.
pub fn graver_basis(a: &ImsetMatrix, budget: &Budget) -> Result<Vec<ToricBinomial>> {
    graver_basis_progress(a, budget, |_, _| {})
}

/// As [`graver_basis`], calling `progress(lifted_coordinates, current_size)`.
pub fn graver_basis_progress(
    a: &ImsetMatrix,
    budget: &Budget,
    mut progress: impl FnMut(usize, usize),
) -> Result<Vec<ToricBinomial>> {
    let k = a.num_cols();
    if k > 64 {
        return Err(Error::domain("Graver bases are supported for at most 64 columns (n ≤ 4)"));
    }
    let (basis, tau) = identity_on_free_coordinates(&kernel_basis(a))?;
    let mut mask: u64 = tau.iter().fold(0, |m, &i| m | 1 << i);
    let mut g: Vec<Move> = Vec::new();
    for b in &basis {
        let m = Move::new(b.iter().map(|&x| x as i32).collect());
        g.push(m.neg());
        g.push(m);
    }
    progress(tau.len(), g.len() / 2);
    for c in (0..k).filter(|c| !tau.contains(c)) {
        let new_mask = mask | 1 << c;
        let bit = 1u64 << c;
        let mut idx = 0;
        while idx < g.len() {
            budget.check("graver completion")?;
            let f = g[idx].clone();
            let fk = f.v[c];
            if fk != 0 {
                let mut found = Vec::new();
                for h in &g[..idx] {
                    let hk = h.v[c];
                    if hk == 0 || (hk > 0) == (fk > 0) {
                        continue;
                    }
                    if ((f.pos & h.neg) | (f.neg & h.pos)) & mask != 0 {
                        continue;
                    }
                    let s = Move::new(f.v.iter().zip(&h.v).map(|(x, y)| x + y).collect());
                    found.push(s);
                }
                for s in found {
                    if let Some(r) = reduce(s, &g, new_mask) {
                        g.push(r.neg());
                        g.push(r);
                    }
                }
            }
            idx += 1;
        }
        debug_assert!(g.iter().all(|m| (m.pos | m.neg) & bit != 0 || m.v[c] == 0));
        g = minimal_elements(g, new_mask);
        mask = new_mask;
        progress(mask.count_ones() as usize, g.len() / 2);
    }
    let mut out: Vec<ToricBinomial> = g
        .into_iter()
        .filter(|m| m.v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .map(|m| ToricBinomial::new(m.v.into_iter().map(i64::from).collect()))
        .collect::<Result<_>>()?;
    canonical_order(&mut out);
    Ok(out)
}

/// `true` iff some other element conformally divides an element (pairwise check).
pub fn has_conformal_divisor(set: &[ToricBinomial]) -> bool {
    let moves: Vec<Move> = set
        .iter()
        .flat_map(|b| {
            let m = Move::new(b.vector().iter().map(|&x| x as i32).collect());
            [m.neg(), m]
        })
        .collect();
    let full = u64::MAX;
    moves.iter().enumerate().any(|(i, a)| {
        moves.iter().enumerate().any(|(j, b)| i != j && i / 2 != j / 2 && b.conformal_le(a, full))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialClassification {
    pub total_degree: u32,
    pub is_homogeneous: bool,
    pub is_multilinear: bool,
    pub symmetry_class_id: usize,
}

/// Image of a binomial under relabelling the variables by `g`.
pub fn permute_binomial(b: &ToricBinomial, a: &ImsetMatrix, g: &Permutation) -> Result<ToricBinomial> {
    let mut v = vec![0i64; b.vector().len()];
    for (i, (s, _)) in a.columns().iter().enumerate() {
        if b.vector()[i] != 0 {
            let t = apply_permutation(s, g)?;
            let j = a.column_of(&t).ok_or_else(|| Error::Internal(format!("{t} is not a column")))?;
            v[j] = b.vector()[i];
        }
    }
    ToricBinomial::new(v)
}

/// Orbits of the symmetric group on a closed set of binomials, listed by
/// first appearance in `binomials`.
pub fn binomial_orbits(binomials: &[ToricBinomial], a: &ImsetMatrix) -> Result<Vec<Vec<ToricBinomial>>> {
    let mut orbits = orbit_partition(binomials, a.n(), |b, g| permute_binomial(b, a, g))?;
    let pos = |b: &ToricBinomial| binomials.iter().position(|x| x == b).unwrap_or(usize::MAX);
    orbits.sort_by_key(|o| o.iter().map(pos).min());
    Ok(orbits)
}

pub fn classify(binomials: &[ToricBinomial], a: &ImsetMatrix) -> Result<Vec<BinomialClassification>> {
    let orbits = binomial_orbits(binomials, a)?;
    binomials
        .iter()
        .map(|b| {
            let id = orbits
                .iter()
                .position(|o| o.contains(b))
                .ok_or_else(|| Error::Internal("binomial missing from its orbit partition".into()))?;
            Ok(BinomialClassification {
                total_degree: b.degree(),
                is_homogeneous: b.is_homogeneous(),
                is_multilinear: b.is_multilinear(),
                symmetry_class_id: id,
            })
        })
        .collect()
}

/// Per-degree counts and orbit counts of a classified set.
pub fn degree_profile(classes: &[BinomialClassification]) -> Vec<(u32, usize, usize)> {
    let mut degs: Vec<u32> = classes.iter().map(|c| c.total_degree).collect();
    degs.sort_unstable();
    degs.dedup();
    degs.into_iter()
        .map(|d| {
            let of_d: Vec<&BinomialClassification> = classes.iter().filter(|c| c.total_degree == d).collect();
            let mut ids: Vec<usize> = of_d.iter().map(|c| c.symmetry_class_id).collect();
            ids.sort_unstable();
            ids.dedup();
            (d, of_d.len(), ids.len())
        })
        .collect()
}

/// Prop. 1: every quadratic multilinear binomial extends to a three-sided
/// relation. Fails on the first binomial that does not.
pub fn quadratics_to_relations(binomials: &[ToricBinomial], a: &ImsetMatrix) -> Result<Vec<CIRelation>> {
    let stmts = a.statements();
    binomials
        .iter()
        .filter(|b| b.degree() == 2)
        .map(|b| {
            let e = b.to_expr(&stmts)?;
            extend_quadratic_binomial(&e, a.n())?
                .ok_or_else(|| Error::Internal(format!("quadratic binomial {e} has no relation target")))
        })
        .collect()
}

/// JSON record of one binomial.
pub fn binomial_json(b: &ToricBinomial, a: &ImsetMatrix, class: Option<&BinomialClassification>) -> serde_json::Value {
    let stmts = a.statements();
    let expr = b.to_expr(&stmts).ok();
    serde_json::json!({
        "vector": b.vector(),
        "plus": expr.as_ref().map(|e| e.plus().iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        "minus": expr.as_ref().map(|e| e.minus().iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        "degree": b.degree(),
        "is_homogeneous": b.is_homogeneous(),
        "is_multilinear": b.is_multilinear(),
        "orbit": class.map(|c| c.symmetry_class_id),
    })
}

impl Serialize for ToricBinomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vector.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci_model::enumerate_structural;
    use crate::imset::build_matrix;

    #[test]
    fn kernels() {
        for (n, dim) in [(3u8, 2usize), (4, 13)] {
            let a = build_matrix(n).unwrap();
            let k = kernel_basis(&a);
            assert_eq!(k.len(), dim);
            assert!(k.iter().all(|v| in_kernel(&a, v)));
        }
    }

    #[test]
    fn n3_markov_equals_graver() {
        let a = build_matrix(3).unwrap();
        let b = Budget::unlimited();
        let m = markov_basis(&a, &b).unwrap();
        let me = markov_basis_with(&a, Saturation::Elimination, &b).unwrap();
        assert_eq!(m, me);
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|x| x.degree() == 2 && in_kernel(&a, x.vector())));
        let g = graver_basis(&a, &b).unwrap();
        assert_eq!(g, m);
        let c = classify(&m, &a).unwrap();
        assert_eq!(degree_profile(&c), vec![(2, 3, 1)]);
        assert!(!has_conformal_divisor(&g));
        let rels = quadratics_to_relations(&g, &a).unwrap();
        let mut targets: Vec<CIStatement> = rels.iter().map(|r| r.target().unwrap()).collect();
        targets.sort();
        let mut s3: Vec<CIStatement> = enumerate_structural(3).unwrap().into_iter().map(|(s, _)| s).collect();
        s3.sort();
        assert_eq!(targets, s3);
    }

    #[test]
    fn fiber_connectivity() {
        let a = build_matrix(3).unwrap();
        let m = markov_basis(&a, &Budget::unlimited()).unwrap();
        // each generator is needed: dropping it disconnects its own fiber
        for (i, b) in m.iter().enumerate() {
            let others: Vec<ToricBinomial> = m.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
            assert!(!connected(&b.plus(), &b.minus(), &others));
            assert!(connected(&b.plus(), &b.minus(), &m));
        }
    }

    #[test]
    fn sign_canonical() {
        let b = ToricBinomial::new(vec![0, -1, 1]).unwrap();
        assert_eq!(b.vector(), &[0, 1, -1]);
        assert!(ToricBinomial::new(vec![0, 0]).is_err());
    }
}
