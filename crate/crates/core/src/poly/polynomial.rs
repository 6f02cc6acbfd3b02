use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// Polynomial ring ℚ[variables] with a fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    variables: Vec<String>,
    order: MonomialOrder,
}

impl Ring {
    pub fn new(variables: Vec<String>, order: MonomialOrder) -> Result<Arc<Ring>> {
        let mut seen = std::collections::HashSet::new();
        for v in &variables {
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::domain(format!("invalid variable name {v:?}")));
            }
            if v.chars().next().unwrap().is_ascii_digit() {
                return Err(Error::domain(format!("variable name {v:?} starts with a digit")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::domain(format!("duplicate variable {v}")));
            }
        }
        if let MonomialOrder::Block { first } = order {
            if first > variables.len() {
                return Err(Error::domain("elimination block larger than the variable list"));
            }
        }
        Ok(Arc::new(Ring { variables, order }))
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring { variables: self.variables.clone(), order })
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::monomial(Monomial::var(self.nvars(), i), BigRational::one())
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.variables[i].clone() } else { format!("{}^{e}", self.variables[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&self.format_monomial(m));
            } else {
                out.push_str(&format!("{a}*{}", self.format_monomial(m)));
            }
        }
        out
    }

    /// Parses the sparse text format, e.g. `p111*p221 - p121*p211` or `3/2*x^2 - 1`.
    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        let err = |offset: usize, message: &str| Error::Parse { offset, message: message.into() };
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let mut terms: Vec<(Monomial, BigRational)> = Vec::new();
        let mut first = true;
        loop {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                if first {
                    return Err(err(pos, "empty polynomial"));
                }
                break;
            }
            let mut sign = BigRational::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
                skip_ws(&mut pos);
            } else if !first {
                return Err(err(pos, "expected '+' or '-'"));
            }
            first = false;
            let mut coeff = sign;
            let mut exps = vec![0u16; self.nvars()];
            let mut factors = 0;
            loop {
                skip_ws(&mut pos);
                if pos == bytes.len() {
                    return Err(err(pos, "expected a factor"));
                }
                if bytes[pos].is_ascii_digit() {
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let num: BigInt = text[start..pos].parse().map_err(|_| err(start, "bad integer"))?;
                    let mut q = BigRational::from_integer(num);
                    if pos < bytes.len() && bytes[pos] == b'/' {
                        pos += 1;
                        let s2 = pos;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        let den: BigInt = text[s2..pos].parse().map_err(|_| err(s2, "bad denominator"))?;
                        if den.is_zero() {
                            return Err(err(s2, "zero denominator"));
                        }
                        q /= BigRational::from_integer(den);
                    }
                    coeff *= q;
                } else if bytes[pos].is_ascii_alphabetic() || bytes[pos] == b'_' {
                    let start = pos;
                    while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                        pos += 1;
                    }
                    let name = &text[start..pos];
                    let idx = self.var_index(name).ok_or_else(|| err(start, &format!("unknown variable {name}")))?;
                    let mut e = 1u16;
                    if pos < bytes.len() && bytes[pos] == b'^' {
                        pos += 1;
                        let s2 = pos;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        e = text[s2..pos].parse().map_err(|_| err(s2, "bad exponent"))?;
                    }
                    exps[idx] += e;
                } else {
                    return Err(err(pos, "expected a coefficient or variable"));
                }
                factors += 1;
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                    continue;
                }
                break;
            }
            debug_assert!(factors > 0);
            terms.push((Monomial::new(exps), coeff));
        }
        Ok(Polynomial::from_terms(terms, self))
    }
}

/// Sparse polynomial: terms strictly decreasing in the ring order, no zero
/// coefficients. The order is that of the ring the polynomial was built in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<(Monomial, BigRational)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: vec![(m, c)] }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    /// Builds from arbitrary terms: sorts, combines duplicates, drops zeros.
    pub fn from_terms(mut terms: Vec<(Monomial, BigRational)>, ring: &Ring) -> Self {
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { terms: out }
    }

    /// Binomial `x^a − x^b` from exponent vectors.
    pub fn binomial(a: Vec<u16>, b: Vec<u16>, ring: &Ring) -> Self {
        Self::from_terms(
            vec![(Monomial::new(a), BigRational::one()), (Monomial::new(b), -BigRational::one())],
            ring,
        )
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, BigRational)>) -> Self {
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn nvars(&self) -> Option<usize> {
        self.terms.first().map(|t| t.0.nvars())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn make_monic(&mut self) {
        if let Some(lc) = self.terms.first().map(|t| t.1.clone()) {
            if !lc.is_one() {
                for t in &mut self.terms {
                    t.1 /= &lc;
                }
            }
        }
    }

    pub fn monic(mut self) -> Self {
        self.make_monic();
        self
    }

    pub fn neg(&self) -> Self {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial { terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect() }
    }

    pub fn add(&self, other: &Polynomial, ring: &Ring) -> Self {
        self.add_scaled(other, &BigRational::one(), None, ring)
    }

    pub fn sub(&self, other: &Polynomial, ring: &Ring) -> Self {
        self.add_scaled(other, &-BigRational::one(), None, ring)
    }

    pub fn mul(&self, other: &Polynomial, ring: &Ring) -> Self {
        let mut acc = Polynomial::zero();
        for (m, c) in &other.terms {
            acc = acc.add_scaled(self, c, Some(m), ring);
        }
        acc
    }

    pub fn pow(&self, k: u32, ring: &Ring) -> Self {
        let n = self.nvars().unwrap_or(ring.nvars());
        let mut acc = Polynomial::constant(n, BigRational::one());
        for _ in 0..k {
            acc = acc.mul(self, ring);
        }
        acc
    }

    /// `self + c · m · other` by a single merge.
    pub fn add_scaled(&self, other: &Polynomial, c: &BigRational, m: Option<&Monomial>, ring: &Ring) -> Self {
        merge(&self.terms, &other.terms, c, m, ring)
    }

    /// Re-sorts the terms for a different order on the same variables.
    pub fn reorder(&self, ring: &Ring) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    /// Substitutes variable permutation: variable `i` of the result carries the
    /// exponent of variable `perm[i]` of `self`.
    pub fn permute_vars(&self, perm: &[usize], ring: &Ring) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())).collect(), ring)
    }

    /// Evaluates at an integer point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut s = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            s += v;
        }
        s
    }
}

fn merge(
    a: &[(Monomial, BigRational)],
    b: &[(Monomial, BigRational)],
    c: &BigRational,
    m: Option<&Monomial>,
    ring: &Ring,
) -> Polynomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let bmono = |j: usize| match m {
        Some(m) => b[j].0.mul(m),
        None => b[j].0.clone(),
    };
    let mut bj = if j < b.len() { Some(bmono(j)) } else { None };
    while i < a.len() || bj.is_some() {
        match (a.get(i), bj.as_ref()) {
            (Some(ta), Some(mb)) => match ring.cmp(&ta.0, mb) {
                Ordering::Greater => {
                    out.push(ta.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bj.take().unwrap(), &b[j].1 * c));
                    j += 1;
                    bj = if j < b.len() { Some(bmono(j)) } else { None };
                }
                Ordering::Equal => {
                    let s = &ta.1 + &b[j].1 * c;
                    if !s.is_zero() {
                        out.push((bj.take().unwrap(), s));
                    }
                    i += 1;
                    j += 1;
                    bj = if j < b.len() { Some(bmono(j)) } else { None };
                }
            },
            (Some(ta), None) => {
                out.push(ta.clone());
                i += 1;
            }
            (None, Some(_)) => {
                out.push((bj.take().unwrap(), &b[j].1 * c));
                j += 1;
                bj = if j < b.len() { Some(bmono(j)) } else { None };
            }
            (None, None) => unreachable!(),
        }
    }
    Polynomial { terms: out }
}

/// Wrapper for displaying a polynomial with its ring's variable names.
pub struct Display<'a>(pub &'a Polynomial, pub &'a Ring);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.1.format(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(vars.iter().map(|s| s.to_string()).collect(), MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let r = ring(&["x", "y", "z"]);
        let p = r.parse("x^2 - 3/2*y*z + 1 - x^2").unwrap();
        assert_eq!(r.format(&p), "-3/2*y*z + 1");
        let q = r.parse("x*y - y*x").unwrap();
        assert!(q.is_zero());
        assert!(r.parse("x + w").is_err());
        assert!(r.parse("").is_err());
        assert!(r.parse("x y").is_err());
    }

    #[test]
    fn arithmetic() {
        let r = ring(&["x", "y"]);
        let a = r.parse("x - y").unwrap();
        let b = r.parse("x + y").unwrap();
        assert_eq!(a.mul(&b, &r), r.parse("x^2 - y^2").unwrap());
        assert_eq!(a.pow(2, &r), r.parse("x^2 - 2*x*y + y^2").unwrap());
        assert!(a.sub(&a, &r).is_zero());
    }

    #[test]
    fn ring_validation() {
        assert!(Ring::new(vec!["x".into(), "x".into()], MonomialOrder::Lex).is_err());
        assert!(Ring::new(vec!["1x".into()], MonomialOrder::Lex).is_err());
    }
}
