use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::groebner::{groebner, normal_form, verify_groebner};
use super::hilbert::{dim_degree_from_numerator, hilbert_numerator};
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::{Polynomial, Ring};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Krull dimension of the affine cone and projective degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimDeg {
    pub krull_dim: usize,
    pub degree: u64,
}

/// Ideal given by generators, with reduced Gröbner bases cached per order.
/// Each cache slot is written once; concurrent readers share the result.
#[derive(Debug)]
pub struct IdealHandle {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    cache: RwLock<HashMap<MonomialOrder, Arc<Vec<Polynomial>>>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl IdealHandle {
    /// Generators are re-sorted into `ring`'s order; zero generators dropped.
    pub fn new(ring: Arc<Ring>, generators: Vec<Polynomial>) -> Result<Self> {
        let n = ring.nvars();
        if generators.iter().any(|g| g.nvars().is_some_and(|k| k != n)) {
            return Err(Error::RingMismatch("generator has the wrong number of variables".into()));
        }
        let generators = generators.iter().filter(|g| !g.is_zero()).map(|g| g.reorder(&ring)).collect();
        Ok(IdealHandle { ring, generators, cache: RwLock::new(HashMap::new()) })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Polynomial::is_homogeneous)
    }

    /// Reduced Gröbner basis for `order` (terms sorted in that order),
    /// verified by Buchberger's criterion on first computation.
    pub fn groebner_basis(&self, order: &MonomialOrder, budget: &Budget) -> Result<Arc<Vec<Polynomial>>> {
        if let Some(g) = self.cache.read().unwrap().get(order) {
            return Ok(g.clone());
        }
        let ring = self.ring.with_order(order.clone());
        let gens: Vec<Polynomial> = self.generators.iter().map(|g| g.reorder(&ring)).collect();
        let gb = groebner(&gens, &ring, budget)?;
        if !verify_groebner(&gb, &ring, budget)? {
            return Err(Error::Internal("Buchberger criterion fails on computed basis".into()));
        }
        let gb = Arc::new(gb);
        let mut w = self.cache.write().unwrap();
        Ok(w.entry(order.clone()).or_insert(gb).clone())
    }

    pub fn default_basis(&self, budget: &Budget) -> Result<Arc<Vec<Polynomial>>> {
        self.groebner_basis(self.ring.order(), budget)
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        Ok(self.groebner_basis(&MonomialOrder::GrevLex, budget)?.iter().any(Polynomial::is_constant))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "variables": self.ring.variables(),
            "order": self.ring.order().name(),
            "generators": self.generators.iter().map(|g| self.ring.format(g)).collect::<Vec<_>>(),
        })
    }
}

fn same_ring(a: &Ring, b: &Ring) -> Result<()> {
    if a.variables() != b.variables() {
        return Err(Error::RingMismatch("ideals live in rings with different variables".into()));
    }
    Ok(())
}

pub fn ideal_membership(f: &Polynomial, ideal: &IdealHandle, budget: &Budget) -> Result<bool> {
    if f.nvars().is_some_and(|k| k != ideal.ring.nvars()) {
        return Err(Error::RingMismatch("polynomial has the wrong number of variables".into()));
    }
    let order = MonomialOrder::GrevLex;
    let gb = ideal.groebner_basis(&order, budget)?;
    let ring = ideal.ring.with_order(order);
    Ok(normal_form(&f.reorder(&ring), &gb, &ring).is_zero())
}

/// `I ⊆ J`, via membership of each generator of `I`.
pub fn ideal_contains(j: &IdealHandle, i: &IdealHandle, budget: &Budget) -> Result<bool> {
    same_ring(&j.ring, &i.ring)?;
    for g in i.generators() {
        if !ideal_membership(g, j, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn ideal_equal(i: &IdealHandle, j: &IdealHandle, budget: &Budget) -> Result<bool> {
    same_ring(&i.ring, &j.ring)?;
    let order = MonomialOrder::GrevLex;
    Ok(i.groebner_basis(&order, budget)? == j.groebner_basis(&order, budget)?)
}

pub fn sum_ideals(parts: &[&IdealHandle]) -> Result<IdealHandle> {
    let first = parts.first().ok_or_else(|| Error::domain("sum of no ideals"))?;
    let mut gens = Vec::new();
    for p in parts {
        same_ring(&first.ring, &p.ring)?;
        gens.extend(p.generators.iter().cloned());
    }
    IdealHandle::new(first.ring.clone(), gens)
}

/// Moves the listed variables to the front (in the given order) and returns
/// the permutation `perm` with new variable `k` = old variable `perm[k]`.
fn front_permutation(n: usize, front: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = front.to_vec();
    perm.extend((0..n).filter(|i| !front.contains(i)));
    perm
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

/// `I ∩ ℚ[remaining variables]` by a block elimination order; generators are
/// returned in the original ring.
pub fn eliminate(ideal: &IdealHandle, vars: &[usize], budget: &Budget) -> Result<IdealHandle> {
    let n = ideal.ring.nvars();
    if vars.iter().any(|&v| v >= n) {
        return Err(Error::domain("variable index out of range"));
    }
    if vars.is_empty() {
        return Ok(ideal.clone());
    }
    let perm = front_permutation(n, vars);
    let names: Vec<String> = perm.iter().map(|&p| ideal.ring.variables()[p].clone()).collect();
    let ering = Ring::new(names, MonomialOrder::Block { first: vars.len() })?;
    let gens: Vec<Polynomial> = ideal.generators.iter().map(|g| g.permute_vars(&perm, &ering)).collect();
    let gb = groebner(&gens, &ering, budget)?;
    let inv = invert(&perm);
    let kept: Vec<Polynomial> = gb
        .into_iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.exps()[..vars.len()].iter().all(|&e| e == 0)))
        .map(|g| g.permute_vars(&inv, &ideal.ring))
        .collect();
    IdealHandle::new(ideal.ring.clone(), kept)
}

/// `(I : v^∞)` by adjoining `t·v − 1` and eliminating `t`.
pub fn saturate_variable(ideal: &IdealHandle, v: usize, budget: &Budget) -> Result<IdealHandle> {
    let n = ideal.ring.nvars();
    if v >= n {
        return Err(Error::domain("variable index out of range"));
    }
    let mut name = "t".to_string();
    while ideal.ring.var_index(&name).is_some() {
        name.push('_');
    }
    let mut names = vec![name];
    names.extend(ideal.ring.variables().iter().cloned());
    let big = Ring::new(names, MonomialOrder::Block { first: 1 })?;
    let lift = |g: &Polynomial| -> Polynomial {
        Polynomial::from_terms(
            g.terms()
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0u16];
                    e.extend_from_slice(m.exps());
                    (Monomial::new(e), c.clone())
                })
                .collect(),
            &big,
        )
    };
    let mut gens: Vec<Polynomial> = ideal.generators.iter().map(lift).collect();
    let mut tv = vec![0u16; n + 1];
    tv[0] = 1;
    tv[v + 1] = 1;
    gens.push(Polynomial::from_terms(
        vec![(Monomial::new(tv), BigRational::one()), (Monomial::one(n + 1), -BigRational::one())],
        &big,
    ));
    let gb = groebner(&gens, &big, budget)?;
    let kept: Vec<Polynomial> = gb
        .into_iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.exps()[0] == 0))
        .map(|g| {
            Polynomial::from_terms(
                g.terms().iter().map(|(m, c)| (Monomial::new(m.exps()[1..].to_vec()), c.clone())).collect(),
                &ideal.ring,
            )
        })
        .collect();
    IdealHandle::new(ideal.ring.clone(), kept)
}

/// `(I : v^∞)` for homogeneous `I`: a grevlex basis with `v` smallest, with
/// every element divided by its largest power of `v` (Bayer's criterion).
pub fn saturate_variable_homogeneous(ideal: &IdealHandle, v: usize, budget: &Budget) -> Result<IdealHandle> {
    let n = ideal.ring.nvars();
    if v >= n {
        return Err(Error::domain("variable index out of range"));
    }
    if !ideal.is_homogeneous() {
        return Err(Error::NotHomogeneous("saturation fast path needs homogeneous generators".into()));
    }
    let mut perm: Vec<usize> = (0..n).filter(|&i| i != v).collect();
    perm.push(v);
    let names: Vec<String> = perm.iter().map(|&p| ideal.ring.variables()[p].clone()).collect();
    let r = Ring::new(names, MonomialOrder::GrevLex)?;
    let gens: Vec<Polynomial> = ideal.generators.iter().map(|g| g.permute_vars(&perm, &r)).collect();
    let gb = groebner(&gens, &r, budget)?;
    let inv = invert(&perm);
    let out: Vec<Polynomial> = gb
        .into_iter()
        .map(|g| {
            let k = g.terms().iter().map(|(m, _)| m.exps()[n - 1]).min().unwrap_or(0);
            let g = if k > 0 {
                Polynomial::from_terms(g.terms().iter().map(|(m, c)| (m.colon_var_power(n - 1, k), c.clone())).collect(), &r)
            } else {
                g
            };
            g.permute_vars(&inv, &ideal.ring)
        })
        .collect();
    IdealHandle::new(ideal.ring.clone(), out)
}

/// Dimension and degree of a homogeneous ideal from the Hilbert series of its
/// grevlex initial ideal.
pub fn dim_degree(ideal: &IdealHandle, budget: &Budget) -> Result<DimDeg> {
    if !ideal.is_homogeneous() {
        return Err(Error::NotHomogeneous("dim/degree needs homogeneous generators".into()));
    }
    let gb = ideal.groebner_basis(&MonomialOrder::GrevLex, budget)?;
    let lms: Vec<Vec<u16>> = gb.iter().map(|g| g.leading_monomial().unwrap().exps().to_vec()).collect();
    let k = hilbert_numerator(&lms);
    let (d, deg) = dim_degree_from_numerator(&k, ideal.ring.nvars())
        .ok_or_else(|| Error::domain("unit ideal has no dimension/degree"))?;
    if deg <= 0 {
        return Err(Error::Internal(format!("non-positive degree {deg}")));
    }
    Ok(DimDeg { krull_dim: d, degree: deg as u64 })
}
