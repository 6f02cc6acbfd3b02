use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::monomial::Monomial;
use super::polynomial::{Polynomial, Ring};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Full normal form of `f` modulo `g` (divisors tried in list order).
pub fn normal_form(f: &Polynomial, g: &[Polynomial], ring: &Ring) -> Polynomial {
    let refs: Vec<&Polynomial> = g.iter().filter(|p| !p.is_zero()).collect();
    normal_form_refs(f, &refs, ring)
}

pub(crate) fn normal_form_refs(f: &Polynomial, g: &[&Polynomial], ring: &Ring) -> Polynomial {
    let mut rem: Vec<(Monomial, BigRational)> = Vec::new();
    let mut p = f.clone();
    let mut start = 0;
    while start < p.len() {
        let (lm, lc) = &p.terms()[start];
        match g.iter().find(|d| d.leading_monomial().unwrap().divides(lm)) {
            Some(d) => {
                let q = lm.div(d.leading_monomial().unwrap());
                let c = -(lc / d.leading_coeff().unwrap());
                let tail = Polynomial::from_sorted_unchecked(p.terms()[start..].to_vec());
                p = tail.add_scaled(d, &c, Some(&q), ring);
                start = 0;
            }
            None => {
                rem.push(p.terms()[start].clone());
                start += 1;
            }
        }
    }
    Polynomial::from_sorted_unchecked(rem)
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ring: &Ring) -> Polynomial {
    let (fm, gm) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = fm.lcm(gm);
    let a = Polynomial::zero().add_scaled(f, &(BigRational::one() / f.leading_coeff().unwrap()), Some(&l.div(fm)), ring);
    a.add_scaled(g, &(-BigRational::one() / g.leading_coeff().unwrap()), Some(&l.div(gm)), ring)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'r> {
    ring: &'r Ring,
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    /// Gebauer–Möller installation of a new basis element.
    fn update(&mut self, h: Polynomial) {
        let hi = self.polys.len();
        self.polys.push(h);
        self.active.push(false);
        let hm = self.lm(hi).clone();
        let cands: Vec<(usize, Monomial)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, hm.lcm(self.lm(g))))
            .collect();
        let mut d: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, (g, l)) in cands.iter().enumerate() {
            let coprime = hm.coprime(self.lm(*g));
            let dominated = cands[idx + 1..].iter().any(|(_, l2)| l2.divides(l))
                || d.iter().any(|(_, l2, _)| l2.divides(l));
            if coprime || !dominated {
                d.push((*g, l.clone(), coprime));
            }
        }
        let polys = &self.polys;
        let lm = |i: usize| polys[i].leading_monomial().unwrap();
        self.pairs.retain(|p| {
            !(hm.divides(&p.lcm) && lm(p.i).lcm(&hm) != p.lcm && lm(p.j).lcm(&hm) != p.lcm)
        });
        for (g, l, coprime) in d {
            if !coprime {
                self.pairs.push(Pair { i: g, j: hi, lcm: l });
            }
        }
        for g in 0..hi {
            if self.active[g] && hm.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
        self.active[hi] = true;
        let ring = self.ring;
        // normal strategy: smallest lcm popped last from the end
        self.pairs.sort_by(|a, b| {
            b.lcm.degree().cmp(&a.lcm.degree()).then_with(|| ring.cmp(&b.lcm, &a.lcm)).then_with(|| (b.i, b.j).cmp(&(a.i, a.j)))
        });
    }

    fn active_refs(&self) -> Vec<&Polynomial> {
        (0..self.polys.len()).filter(|&i| self.active[i]).map(|i| &self.polys[i]).collect()
    }
}

/// Reduced (monic, auto-reduced) Gröbner basis of the ideal generated by `gens`,
/// whose terms must be sorted in `ring`'s order.
pub fn groebner(gens: &[Polynomial], ring: &Ring, budget: &Budget) -> Result<Vec<Polynomial>> {
    let mut st = State { ring, polys: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    let mut input: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().map(Polynomial::monic).collect();
    input.sort_by(|a, b| {
        let (x, y) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
        x.degree().cmp(&y.degree()).then_with(|| ring.cmp(x, y))
    });
    for g in input {
        let r = normal_form_refs(&g, &st.active_refs(), ring);
        if !r.is_zero() {
            if r.is_constant() {
                return Ok(vec![r.monic()]);
            }
            st.update(r.monic());
        }
    }
    let mut steps = 0usize;
    while let Some(p) = st.pairs.pop() {
        steps += 1;
        if steps % 16 == 0 {
            budget.check("groebner basis")?;
        }
        let s = s_polynomial(&st.polys[p.i], &st.polys[p.j], ring);
        let r = normal_form_refs(&s, &st.active_refs(), ring);
        if !r.is_zero() {
            if r.is_constant() {
                return Ok(vec![r.monic()]);
            }
            st.update(r.monic());
        }
    }
    let basis: Vec<Polynomial> = st.active_refs().into_iter().cloned().collect();
    Ok(reduce_basis(basis, ring))
}

/// Minimalizes and tail-reduces a Gröbner basis; output sorted by decreasing
/// leading monomial, all monic.
pub fn reduce_basis(basis: Vec<Polynomial>, ring: &Ring) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = basis.into_iter().filter(|p| !p.is_zero()).map(Polynomial::monic).collect();
    basis.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in basis {
        let lm = p.leading_monomial().unwrap();
        if !minimal.iter().any(|q| q.leading_monomial().unwrap().divides(lm)) {
            minimal.push(p);
        }
    }
    let reduced: Vec<Polynomial> = (0..minimal.len())
        .into_par_iter()
        .map(|i| {
            let others: Vec<&Polynomial> =
                minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
            let p = &minimal[i];
            let head = Polynomial::from_sorted_unchecked(p.terms()[..1].to_vec());
            let tail = Polynomial::from_sorted_unchecked(p.terms()[1..].to_vec());
            head.add(&normal_form_refs(&tail, &others, ring), ring)
        })
        .collect();
    let mut out = reduced;
    out.sort_by(|a, b| ring.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    out
}

/// Buchberger's criterion: every S-polynomial of `g` reduces to zero
/// (pairs with coprime leading monomials are skipped by the product criterion).
pub fn verify_groebner(g: &[Polynomial], ring: &Ring, budget: &Budget) -> Result<bool> {
    let refs: Vec<&Polynomial> = g.iter().collect();
    let pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|i| (i + 1..g.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !g[i].leading_monomial().unwrap().coprime(g[j].leading_monomial().unwrap()))
        .collect();
    let bad = pairs.par_iter().map(|&(i, j)| -> Result<bool> {
        budget.check("groebner verification")?;
        Ok(!normal_form_refs(&s_polynomial(&g[i], &g[j], ring), &refs, ring).is_zero())
    });
    let results: Vec<Result<bool>> = bad.collect();
    for r in results {
        if r? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Errors if `basis` fails the post-hoc Buchberger check.
pub fn groebner_verified(gens: &[Polynomial], ring: &Ring, budget: &Budget) -> Result<Vec<Polynomial>> {
    let g = groebner(gens, ring, budget)?;
    if !verify_groebner(&g, ring, budget)? {
        return Err(Error::Internal("Buchberger criterion fails on computed basis".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;
    use std::sync::Arc;

    fn ring(vars: &[&str], o: MonomialOrder) -> Arc<Ring> {
        Ring::new(vars.iter().map(|s| s.to_string()).collect(), o).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let f = r.parse("x^2 - y^2").unwrap();
        assert!(normal_form(&f, &[r.parse("x - y").unwrap()], &r).is_zero());
        assert!(normal_form(&f, &[f.clone()], &r).is_zero());
        let x = r.parse("x").unwrap();
        assert_eq!(normal_form(&x, &[r.parse("y").unwrap()], &r), x);
    }

    #[test]
    fn small_bases() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let g = groebner(&[r.parse("x").unwrap(), r.parse("x + y").unwrap()], &r, &Budget::unlimited()).unwrap();
        assert_eq!(g, vec![r.parse("x").unwrap(), r.parse("y").unwrap()]);
        let g = groebner(&[r.parse("2*x*y - 4").unwrap()], &r, &Budget::unlimited()).unwrap();
        assert_eq!(g, vec![r.parse("x*y - 2").unwrap()]);
        assert!(groebner(&[], &r, &Budget::unlimited()).unwrap().is_empty());
        let unit = groebner(&[r.parse("x").unwrap(), r.parse("x - 1").unwrap()], &r, &Budget::unlimited()).unwrap();
        assert_eq!(unit, vec![r.parse("1").unwrap()]);
    }

    #[test]
    fn twisted_cubic() {
        let r = ring(&["x", "y", "z", "w"], MonomialOrder::GrevLex);
        let gens: Vec<Polynomial> =
            ["x*z - y^2", "y*w - z^2", "x*w - y*z"].iter().map(|s| r.parse(s).unwrap()).collect();
        let g = groebner_verified(&gens, &r, &Budget::unlimited()).unwrap();
        assert_eq!(g.len(), 3);
        // shuffled input gives the same reduced basis
        let mut rev = gens.clone();
        rev.reverse();
        assert_eq!(groebner(&rev, &r, &Budget::unlimited()).unwrap(), g);
        // lex basis has an extra element
        let rl = r.with_order(MonomialOrder::Lex);
        let gl: Vec<Polynomial> = gens.iter().map(|p| p.reorder(&rl)).collect();
        let g = groebner_verified(&gl, &rl, &Budget::unlimited()).unwrap();
        assert!(verify_groebner(&g, &rl, &Budget::unlimited()).unwrap());
    }
}
