//! Hilbert series numerators of monomial ideals by pivot recursion.

use std::collections::HashMap;

type Mono = Vec<u16>;

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort_by_key(|g| (g.iter().map(|&e| e as u32).sum::<u32>(), g.clone()));
    gens.dedup();
    let mut out: Vec<Mono> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out.sort();
    out
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i128>, b: &[i128], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn one_minus_t_pow(d: usize) -> Vec<i128> {
    let mut v = vec![0i128; d + 1];
    v[0] = 1;
    v[d] -= 1;
    v
}

struct Hilbert {
    memo: HashMap<Vec<Mono>, Vec<i128>>,
}

impl Hilbert {
    /// Numerator `K(t)` with `HS(S/M) = K(t) / (1−t)^N`, for minimal generators.
    fn numerator(&mut self, gens: Vec<Mono>) -> Vec<i128> {
        if gens.is_empty() {
            return vec![1];
        }
        if gens.len() == 1 {
            return one_minus_t_pow(gens[0].iter().map(|&e| e as usize).sum());
        }
        if let Some(k) = self.memo.get(&gens) {
            return k.clone();
        }
        let result = match components(&gens) {
            Some(parts) => {
                let mut acc = vec![1i128];
                for p in parts {
                    let k = self.numerator(p);
                    acc = poly_mul(&acc, &k);
                }
                acc
            }
            None => {
                let nv = gens[0].len();
                // variable occurring in most generators
                let (x, _) = (0..nv)
                    .map(|i| (i, gens.iter().filter(|g| g[i] > 0).count()))
                    .max_by_key(|&(i, c)| (c, std::cmp::Reverse(i)))
                    .unwrap();
                let is_pure = |g: &Mono| g.iter().enumerate().all(|(i, &e)| i == x || e == 0);
                let e = gens
                    .iter()
                    .filter(|g| g[x] > 0 && !is_pure(g))
                    .map(|g| g[x])
                    .min()
                    .expect("shared variable occurs in a mixed generator");
                let mut pivot = vec![0u16; nv];
                pivot[x] = e;
                let mut plus: Vec<Mono> = gens.iter().filter(|g| !divides(&pivot, g)).cloned().collect();
                plus.push(pivot);
                let colon: Vec<Mono> = gens
                    .iter()
                    .map(|g| {
                        let mut h = g.clone();
                        h[x] = h[x].saturating_sub(e);
                        h
                    })
                    .collect();
                let mut k = self.numerator(minimalize(plus));
                let kc = self.numerator(minimalize(colon));
                poly_add_shifted(&mut k, &kc, e as usize);
                while k.len() > 1 && *k.last().unwrap() == 0 {
                    k.pop();
                }
                k
            }
        };
        self.memo.insert(gens, result.clone());
        result
    }
}

/// Splits generators into groups with pairwise disjoint variable supports;
/// `None` when connected.
fn components(gens: &[Mono]) -> Option<Vec<Vec<Mono>>> {
    let n = gens.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let nx = p[j];
            p[j] = r;
            j = nx;
        }
        r
    }
    let nv = gens[0].len();
    for v in 0..nv {
        let mut first: Option<usize> = None;
        for (i, g) in gens.iter().enumerate() {
            if g[v] > 0 {
                match first {
                    None => first = Some(i),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, i));
                        parent[a] = b;
                    }
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Mono>> = HashMap::new();
    for (i, g) in gens.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(g.clone());
    }
    if groups.len() == 1 {
        return None;
    }
    let mut parts: Vec<Vec<Mono>> = groups.into_values().collect();
    parts.sort();
    Some(parts)
}

/// Hilbert series numerator of `S/M` over `(1−t)^nvars`, `M` generated by
/// the given exponent vectors.
pub fn hilbert_numerator(gens: &[Vec<u16>]) -> Vec<i128> {
    let mut h = Hilbert { memo: HashMap::new() };
    h.numerator(minimalize(gens.to_vec()))
}

/// `(dim, degree)` of `S/M` from the numerator over `(1−t)^nvars`.
pub fn dim_degree_from_numerator(k: &[i128], nvars: usize) -> Option<(usize, i128)> {
    let mut q: Vec<i128> = k.to_vec();
    let mut cancelled = 0usize;
    loop {
        let at_one: i128 = q.iter().sum();
        if at_one != 0 {
            return Some((nvars - cancelled, at_one));
        }
        if q.iter().all(|&c| c == 0) || cancelled == nvars {
            return None;
        }
        // divide by (1 − t): coefficients of q/(1−t) are prefix sums
        let mut out = Vec::with_capacity(q.len() - 1);
        let mut s = 0i128;
        for c in &q[..q.len() - 1] {
            s += c;
            out.push(s);
        }
        q = out;
        cancelled += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_numerators() {
        assert_eq!(hilbert_numerator(&[]), vec![1]);
        // ⟨x y⟩ in 2 vars: 1 − t²
        assert_eq!(hilbert_numerator(&[vec![1, 1]]), vec![1, 0, -1]);
        // ⟨x², xy⟩: 1 − 2t² + t³
        assert_eq!(hilbert_numerator(&[vec![2, 0], vec![1, 1]]), vec![1, 0, -2, 1]);
    }

    #[test]
    fn dims() {
        // zero ideal in 4 vars
        assert_eq!(dim_degree_from_numerator(&[1], 4), Some((4, 1)));
        // twisted cubic initial ideal ⟨xz, xw, yw⟩ (grevlex) in 4 vars: dim 2 deg 3
        let k = hilbert_numerator(&[vec![1, 0, 1, 0], vec![1, 0, 0, 1], vec![0, 1, 0, 1]]);
        assert_eq!(dim_degree_from_numerator(&k, 4), Some((2, 3)));
        // unit ideal
        let k = hilbert_numerator(&[vec![0, 0]]);
        assert_eq!(dim_degree_from_numerator(&k, 2), None);
    }
}
