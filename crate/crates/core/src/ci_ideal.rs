//! CI ideals in the ring of joint probabilities: 2×2 minors of the
//! conditional slices of the (marginalized) probability tensor.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::budget::Budget;
use crate::ci_model::{apply_permutation, CIStatement, IndexSet, Permutation};
use crate::error::{Error, Result};
use crate::poly::{ideal_membership, IdealHandle, Monomial, MonomialOrder, Polynomial, Ring};

/// Number of states `rᵢ ≥ 2` of each of the `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StateVector(Vec<u32>);

impl StateVector {
    pub fn new(r: Vec<u32>) -> Result<Self> {
        if r.is_empty() || r.len() > crate::ci_model::MAX_VARS as usize {
            return Err(Error::domain(format!("state vector of length {} unsupported", r.len())));
        }
        if let Some(x) = r.iter().find(|&&x| x < 2) {
            return Err(Error::domain(format!("every variable needs at least 2 states, got {x}")));
        }
        Ok(StateVector(r))
    }

    pub fn binary(n: u8) -> Self {
        StateVector(vec![2; n as usize])
    }

    /// Parses `2,3,2`.
    pub fn parse(s: &str) -> Result<Self> {
        let r: std::result::Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
        Self::new(r.map_err(|_| Error::Parse { offset: 0, message: format!("bad state vector {s:?}") })?)
    }

    pub fn n(&self) -> u8 {
        self.0.len() as u8
    }

    pub fn states(&self) -> &[u32] {
        &self.0
    }

    pub fn num_outcomes(&self) -> usize {
        self.0.iter().map(|&r| r as usize).product()
    }

    /// All joint outcomes (1-based levels) in lexicographic order.
    pub fn outcomes(&self) -> Vec<Vec<u32>> {
        tuples(&self.0)
    }

    fn index_of(&self, x: &[u32]) -> usize {
        x.iter().zip(&self.0).fold(0, |acc, (&xi, &r)| acc * r as usize + (xi - 1) as usize)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn tuples(ranges: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &r in ranges {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=r).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn var_name(x: &[u32]) -> String {
    if x.iter().all(|&v| v < 10) {
        format!("p{}", x.iter().map(u32::to_string).collect::<String>())
    } else {
        format!("p_{}", x.iter().map(u32::to_string).collect::<Vec<_>>().join("_"))
    }
}

/// ℚ[p_x : x joint outcome], variables in outcome-lexicographic order
/// (`p1…1` first, i.e. largest), graded reverse lexicographic order.
pub fn prob_ring(states: &StateVector) -> Arc<Ring> {
    prob_ring_with(states, MonomialOrder::GrevLex, false)
}

/// As [`prob_ring`], with a chosen order; `reversed` lists `p_{r₁…rₙ}` first.
pub fn prob_ring_with(states: &StateVector, order: MonomialOrder, reversed: bool) -> Arc<Ring> {
    let mut names: Vec<String> = states.outcomes().iter().map(|x| var_name(x)).collect();
    if reversed {
        names.reverse();
    }
    Ring::new(names, order).expect("generated variable names are valid")
}

/// Generators of `I_{I⊥J|K}`: for each K-level, every 2×2 minor of the matrix
/// with rows indexed by I-levels, columns by J-levels, and entries the sums of
/// `p` over all remaining variables. Determinants are taken as
/// `M[a,b]·M[a',b'] − M[a,b']·M[a',b]` for `a < a'`, `b < b'`.
pub fn ci_ideal_generators(s: &CIStatement, states: &StateVector, ring: &Ring) -> Result<Vec<Polynomial>> {
    let n = states.n();
    s.check_within(n)?;
    if ring.nvars() != states.num_outcomes() {
        return Err(Error::RingMismatch("ring does not match the state vector".into()));
    }
    let r = states.states();
    let levels = |set: IndexSet| -> Vec<Vec<u32>> {
        let rs: Vec<u32> = set.iter().map(|i| r[i as usize - 1]).collect();
        tuples(&rs)
    };
    let (iset, jset, kset) = (s.left(), s.right(), s.cond());
    let rest = IndexSet::full(n).difference(s.support());
    let (ilev, jlev, klev, dlev) = (levels(iset), levels(jset), levels(kset), levels(rest));
    let nv = ring.nvars();
    let assemble = |a: &[u32], b: &[u32], c: &[u32], d: &[u32]| -> usize {
        let mut x = vec![0u32; n as usize];
        for (set, vals) in [(iset, a), (jset, b), (kset, c), (rest, d)] {
            for (i, &v) in set.iter().zip(vals) {
                x[i as usize - 1] = v;
            }
        }
        states.index_of(&x)
    };
    let entry = |a: &[u32], b: &[u32], c: &[u32]| -> Polynomial {
        Polynomial::from_terms(
            dlev.iter().map(|d| (Monomial::var(nv, assemble(a, b, c, d)), BigRational::one())).collect(),
            ring,
        )
    };
    let mut gens = Vec::new();
    for c in &klev {
        let m: Vec<Vec<Polynomial>> = ilev.iter().map(|a| jlev.iter().map(|b| entry(a, b, c)).collect()).collect();
        for a in 0..ilev.len() {
            for a2 in a + 1..ilev.len() {
                for b in 0..jlev.len() {
                    for b2 in b + 1..jlev.len() {
                        let g = m[a][b].mul(&m[a2][b2], ring).sub(&m[a][b2].mul(&m[a2][b], ring), ring);
                        gens.push(g);
                    }
                }
            }
        }
    }
    Ok(gens)
}

pub fn ci_ideal(s: &CIStatement, states: &StateVector) -> Result<IdealHandle> {
    let ring = prob_ring(states);
    let gens = ci_ideal_generators(s, states, &ring)?;
    IdealHandle::new(ring, gens)
}

/// Sum of CI ideals over one ring; generators concatenated with duplicates
/// (up to sign) removed.
pub fn sum_ci_ideals(stmts: &[CIStatement], states: &StateVector) -> Result<IdealHandle> {
    sum_ci_ideals_in(stmts, states, prob_ring(states))
}

pub fn sum_ci_ideals_in(stmts: &[CIStatement], states: &StateVector, ring: Arc<Ring>) -> Result<IdealHandle> {
    let mut gens: Vec<Polynomial> = Vec::new();
    for s in stmts {
        for g in ci_ideal_generators(s, states, &ring)? {
            let neg = g.neg();
            if !gens.iter().any(|h| *h == g || *h == neg) {
                gens.push(g);
            }
        }
    }
    IdealHandle::new(ring, gens)
}

/// Ideal of a model (set of elementary statements).
pub fn model_ideal(model: &[CIStatement], states: &StateVector) -> Result<IdealHandle> {
    if let Some(s) = model.iter().find(|s| !s.is_elementary()) {
        return Err(Error::domain(format!("model statement {s} is not elementary")));
    }
    sum_ci_ideals(model, states)
}

/// Image of `ideal` under `p_x ↦ p_{g·x}`, where `(g·x)_{g(i)} = x_i`.
pub fn permute_ring_ideal(ideal: &IdealHandle, g: &Permutation, states: &StateVector) -> Result<IdealHandle> {
    let n = states.n();
    if g.n() != n {
        return Err(Error::domain("permutation size differs from the number of variables"));
    }
    let r = states.states();
    for i in 1..=n {
        if r[g.apply(i) as usize - 1] != r[i as usize - 1] {
            return Err(Error::domain(format!("state counts are not invariant under {g:?}")));
        }
    }
    if ideal.ring().nvars() != states.num_outcomes() {
        return Err(Error::RingMismatch("ideal ring does not match the state vector".into()));
    }
    let outcomes = states.outcomes();
    // perm[idx(g·x)] = idx(x)
    let mut perm = vec![0usize; outcomes.len()];
    for x in &outcomes {
        let mut y = vec![0u32; n as usize];
        for i in 1..=n {
            y[g.apply(i) as usize - 1] = x[i as usize - 1];
        }
        perm[states.index_of(&y)] = states.index_of(x);
    }
    let ring = ideal.ring().clone();
    let gens = ideal.generators().iter().map(|p| p.permute_vars(&perm, &ring)).collect();
    IdealHandle::new(ring, gens)
}

/// Checks `permute_ring_ideal(ci_ideal(s), g) = ci_ideal(g·s)` generator-wise
/// (as sets up to sign) — the mechanism behind relation-side isomorphisms.
pub fn permutation_commutes(s: &CIStatement, g: &Permutation, states: &StateVector) -> Result<bool> {
    let lhs = permute_ring_ideal(&ci_ideal(s, states)?, g, states)?;
    let rhs = ci_ideal(&apply_permutation(s, g)?, states)?;
    let norm = |i: &IdealHandle| {
        let mut v: Vec<Polynomial> = i.generators().iter().cloned().map(Polynomial::monic).collect();
        v.sort_by_key(|p| format!("{p:?}"));
        v
    };
    Ok(norm(&lhs) == norm(&rhs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    /// membership of each generator of `inner` in `outer`
    pub inner_in_outer: Vec<bool>,
    /// membership of each generator of `outer` in `inner`
    pub outer_in_inner: Vec<bool>,
    pub inner_subset_outer: bool,
    pub outer_subset_inner: bool,
}

pub fn containment_report(inner: &IdealHandle, outer: &IdealHandle, budget: &Budget) -> Result<ContainmentReport> {
    if inner.ring().variables() != outer.ring().variables() {
        return Err(Error::RingMismatch("containment across different rings".into()));
    }
    let a: Vec<bool> =
        inner.generators().iter().map(|g| ideal_membership(g, outer, budget)).collect::<Result<_>>()?;
    let b: Vec<bool> =
        outer.generators().iter().map(|g| ideal_membership(g, inner, budget)).collect::<Result<_>>()?;
    Ok(ContainmentReport {
        inner_subset_outer: a.iter().all(|&x| x),
        outer_subset_inner: b.iter().all(|&x| x),
        inner_in_outer: a,
        outer_in_inner: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci_model::enumerate_elementary;
    use crate::poly::{dim_degree, ideal_equal, DimDeg};
    use crate::relation_lang::parse_statement;

    fn st(s: &str) -> CIStatement {
        parse_statement(s).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn rings() {
        let r = prob_ring(&StateVector::binary(3));
        assert_eq!(r.nvars(), 8);
        assert_eq!(r.variables()[0], "p111");
        assert_eq!(r.variables()[7], "p222");
        assert_eq!(prob_ring(&StateVector::new(vec![3, 2, 2]).unwrap()).nvars(), 12);
        assert_eq!(prob_ring(&StateVector::binary(4)).nvars(), 16);
        assert!(StateVector::new(vec![2, 1]).is_err());
        assert_eq!(StateVector::parse("2, 3,2").unwrap().states(), &[2, 3, 2]);
    }

    #[test]
    fn generator_examples() {
        let sv = StateVector::binary(3);
        let i = ci_ideal(&st("1 _||_ 2 | 3"), &sv).unwrap();
        let r = i.ring().clone();
        let f: Vec<String> = i.generators().iter().map(|g| r.format(g)).collect();
        assert_eq!(f.len(), 2);
        let expected = [r.parse("p111*p221 - p121*p211").unwrap(), r.parse("p112*p222 - p122*p212").unwrap()];
        for e in &expected {
            assert!(i.generators().iter().any(|g| g == e || *g == e.neg()), "{}", r.format(e));
        }
        let m = ci_ideal(&st("1 _||_ 2 | e"), &sv).unwrap();
        assert_eq!(m.generators().len(), 1);
        let a = r.parse("p111 + p112").unwrap();
        let b = r.parse("p221 + p222").unwrap();
        let c = r.parse("p121 + p122").unwrap();
        let d = r.parse("p211 + p212").unwrap();
        let q = a.mul(&b, &r).sub(&c.mul(&d, &r), &r);
        assert_eq!(m.generators()[0], q);
        let j1 = sum_ci_ideals(&[st("1 _||_ 2 | 3"), st("1 _||_ 2 | e")], &sv).unwrap();
        assert_eq!(j1.generators().len(), 3);
    }

    #[test]
    fn generator_counts() {
        for sv in [StateVector::binary(4), StateVector::new(vec![2, 3, 2, 2]).unwrap()] {
            let ring = prob_ring(&sv);
            let mut stmts = enumerate_elementary(4).unwrap();
            stmts.extend(crate::ci_model::enumerate_structural(4).unwrap().into_iter().map(|(s, _)| s));
            for s in stmts {
                let prod = |set: IndexSet| set.iter().map(|i| sv.states()[i as usize - 1] as u64).product::<u64>();
                let expected = prod(s.cond()) * binom(prod(s.left()), 2) * binom(prod(s.right()), 2);
                let gens = ci_ideal_generators(&s, &sv, &ring).unwrap();
                assert_eq!(gens.len() as u64, expected, "{s}");
                assert!(gens.iter().all(|g| g.is_homogeneous() && g.total_degree() == Some(2)));
            }
        }
    }

    #[test]
    fn rank_one_points_vanish() {
        // p = a ⊗ b on the I|J split with uniform remaining coordinates
        let sv = StateVector::new(vec![2, 3, 2]).unwrap();
        let s = st("1 _||_ 3 | e");
        let ring = prob_ring(&sv);
        let gens = ci_ideal_generators(&s, &sv, &ring).unwrap();
        let pt: Vec<BigRational> = sv
            .outcomes()
            .iter()
            .map(|x| BigRational::from_integer(((x[0] * 3 + 1) * (x[2] * 5 + 2)).into()))
            .collect();
        for g in gens {
            assert!(num_traits::Zero::is_zero(&g.eval(&pt)));
        }
    }

    #[test]
    fn permutations_commute_n3() {
        let sv = StateVector::binary(3);
        for s in enumerate_elementary(3).unwrap() {
            for g in Permutation::all(3) {
                assert!(permutation_commutes(&s, &g, &sv).unwrap(), "{s} {g:?}");
            }
        }
        let bad = StateVector::new(vec![3, 2, 2]).unwrap();
        let i = ci_ideal(&st("1 _||_ 2 | e"), &bad).unwrap();
        assert!(permute_ring_ideal(&i, &Permutation::transposition(3, 1, 2).unwrap(), &bad).is_err());
    }

    #[test]
    fn segre_j3() {
        let b = Budget::unlimited();
        let j3 = ci_ideal(&st("1 _||_ 23 | e"), &StateVector::binary(3)).unwrap();
        assert_eq!(dim_degree(&j3, &b).unwrap(), DimDeg { krull_dim: 5, degree: 4 });
        let j3 = ci_ideal(&st("1 _||_ 23 | e"), &StateVector::new(vec![3, 2, 2]).unwrap()).unwrap();
        assert_eq!(dim_degree(&j3, &b).unwrap(), DimDeg { krull_dim: 6, degree: 10 });
    }

    #[test]
    fn containment_basics() {
        let b = Budget::unlimited();
        let sv = StateVector::binary(3);
        let i = ci_ideal(&st("1 _||_ 2 | 3"), &sv).unwrap();
        let rep = containment_report(&i, &i, &b).unwrap();
        assert!(rep.inner_subset_outer && rep.outer_subset_inner);
        let big = ci_ideal(&st("12 _||_ 3 | e"), &sv).unwrap();
        let small = ci_ideal(&st("1 _||_ 3 | e"), &sv).unwrap();
        let rep = containment_report(&small, &big, &b).unwrap();
        assert!(rep.inner_subset_outer);
        assert!(!rep.outer_subset_inner);
        assert!(!ideal_equal(&small, &big, &b).unwrap());
    }
}
