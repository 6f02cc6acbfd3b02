//! The cone spanned by the elementary imsets: facets by double description,
//! the face lattice as closed ray-incidence sets, and faces as models.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use serde::Serialize;

use crate::ci_model::CIStatement;
use crate::error::{Error, Result};
use crate::imset::{build_matrix, ImsetMatrix};
use crate::linalg::rank;

/// Bitset over ray (= elementary statement) indices.
pub type RaySet = u64;

#[derive(Clone, Debug)]
pub struct Cone {
    n: u8,
    matrix: ImsetMatrix,
    /// rays restricted to `pivots`, a coordinate set on which projection is injective on the span
    projected: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    lin_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    /// inward normal in ℤ^{2ⁿ}, primitive, zero off the pivot coordinates
    pub normal: Vec<i64>,
    pub incident_rays: RaySet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Face {
    pub incident_rays: RaySet,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// faces sorted by (dim, ray set)
    pub faces: Vec<Face>,
    /// `covers[i]` = indices of the faces covered by face `i`
    pub covers: Vec<Vec<usize>>,
    pub lin_dim: usize,
}

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Greedy row selection of coordinates with full rank on the rays.
fn pivot_coordinates(rays: &[Vec<i64>], target: usize) -> Vec<usize> {
    let m = rays[0].len();
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..m {
        let mut trial = chosen.clone();
        trial.push(c);
        let cols: Vec<Vec<i64>> = rays.iter().map(|r| trial.iter().map(|&i| r[i]).collect()).collect();
        if rank(&cols) == trial.len() {
            chosen = trial;
            if chosen.len() == target {
                break;
            }
        }
    }
    chosen
}

impl Cone {
    pub fn new(n: u8) -> Result<Self> {
        let matrix = build_matrix(n)?;
        if matrix.num_cols() > 64 {
            return Err(Error::domain("face lattices are supported for n ≤ 4"));
        }
        let rays: Vec<Vec<i64>> = matrix.columns().iter().map(|(_, u)| u.coeffs().to_vec()).collect();
        if rays.iter().all(|r| r.iter().all(|&x| x == 0)) {
            return Err(Error::domain("degenerate cone: all rays zero"));
        }
        let lin_dim = rank(&rays);
        let pivots = pivot_coordinates(&rays, lin_dim);
        let projected = rays.iter().map(|r| pivots.iter().map(|&i| r[i]).collect()).collect();
        Ok(Cone { n, matrix, projected, pivots, lin_dim })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn lin_dim(&self) -> usize {
        self.lin_dim
    }

    pub fn ambient_dim(&self) -> usize {
        1 << self.n
    }

    pub fn num_rays(&self) -> usize {
        self.projected.len()
    }

    pub fn statements(&self) -> Vec<CIStatement> {
        self.matrix.statements()
    }

    pub fn full_set(&self) -> RaySet {
        if self.num_rays() == 64 {
            u64::MAX
        } else {
            (1u64 << self.num_rays()) - 1
        }
    }

    /// Dimension of the cone over a ray subset.
    pub fn dim_of(&self, rays: RaySet) -> usize {
        let rows: Vec<Vec<i64>> =
            (0..self.num_rays()).filter(|i| rays >> i & 1 == 1).map(|i| self.projected[i].clone()).collect();
        rank(&rows)
    }

    /// Facets by the double description method on the dual cone.
    pub fn facets(&self) -> Result<Vec<Facet>> {
        let d = self.lin_dim;
        let r = &self.projected;
        let val = |a: &[i128], i: usize| -> i128 { a.iter().zip(&r[i]).map(|(x, &y)| x * y as i128).sum() };
        // d linearly independent rays seed the dual cone
        let mut basis_idx: Vec<usize> = Vec::new();
        for i in 0..r.len() {
            let mut t: Vec<Vec<i64>> = basis_idx.iter().map(|&j| r[j].clone()).collect();
            t.push(r[i].clone());
            if rank(&t) == t.len() {
                basis_idx.push(i);
                if basis_idx.len() == d {
                    break;
                }
            }
        }
        let gens0 = inverse_columns(&basis_idx.iter().map(|&j| r[j].clone()).collect::<Vec<_>>())?;
        // generators: (vector, zero set over processed rays)
        let mut processed: RaySet = basis_idx.iter().fold(0, |m, &j| m | 1 << j);
        let mut gens: Vec<(Vec<i128>, RaySet)> = gens0
            .into_iter()
            .map(|a| {
                let z = (0..r.len()).filter(|&i| processed >> i & 1 == 1 && val(&a, i) == 0).fold(0u64, |m, i| m | 1 << i);
                (a, z)
            })
            .collect();
        for i in 0..r.len() {
            if processed >> i & 1 == 1 {
                continue;
            }
            let vals: Vec<i128> = gens.iter().map(|(a, _)| val(a, i)).collect();
            let pos: Vec<usize> = (0..gens.len()).filter(|&k| vals[k] > 0).collect();
            let neg: Vec<usize> = (0..gens.len()).filter(|&k| vals[k] < 0).collect();
            let mut next: Vec<(Vec<i128>, RaySet)> = Vec::new();
            for k in 0..gens.len() {
                if vals[k] >= 0 {
                    let z = if vals[k] == 0 { gens[k].1 | 1 << i } else { gens[k].1 };
                    next.push((gens[k].0.clone(), z));
                }
            }
            for &p in &pos {
                for &m in &neg {
                    let common = gens[p].1 & gens[m].1;
                    if (common.count_ones() as usize) + 2 < d {
                        continue;
                    }
                    let adjacent = (0..gens.len()).all(|k| k == p || k == m || gens[k].1 & common != common);
                    if !adjacent {
                        continue;
                    }
                    let mut a: Vec<i128> =
                        gens[p].0.iter().zip(&gens[m].0).map(|(x, y)| x * (-vals[m]) + y * vals[p]).collect();
                    gcd_normalize(&mut a);
                    next.push((a, common | 1 << i));
                }
            }
            processed |= 1 << i;
            gens = next;
        }
        let mut facets: Vec<Facet> = gens
            .into_iter()
            .map(|(a, z)| {
                let mut normal = vec![0i64; self.ambient_dim()];
                for (k, &p) in self.pivots.iter().enumerate() {
                    normal[p] = i64::try_from(a[k]).expect("facet normal overflow");
                }
                Facet { normal, incident_rays: z }
            })
            .collect();
        facets.sort_by_key(|f| f.incident_rays);
        facets.dedup_by_key(|f| f.incident_rays);
        // sanity: inward and exact incidence
        for f in &facets {
            for (i, (_, u)) in self.matrix.columns().iter().enumerate() {
                let v: i64 = f.normal.iter().zip(u.coeffs()).map(|(a, b)| a * b).sum();
                if v < 0 || (v == 0) != (f.incident_rays >> i & 1 == 1) {
                    return Err(Error::Internal("double description produced an invalid facet".into()));
                }
            }
        }
        Ok(facets)
    }

    pub fn face_lattice(&self) -> Result<FaceLattice> {
        let facets = self.facets()?;
        let sets: Vec<RaySet> = facets.iter().map(|f| f.incident_rays).collect();
        let full = self.full_set();
        let mut seen: HashSet<RaySet> = HashSet::new();
        seen.insert(full);
        let mut frontier = vec![full];
        while let Some(f) = frontier.pop() {
            for &g in &sets {
                let h = f & g;
                if seen.insert(h) {
                    frontier.push(h);
                }
            }
        }
        let mut faces: Vec<Face> = seen.into_iter().map(|s| Face { incident_rays: s, dim: self.dim_of(s) }).collect();
        faces.sort_by_key(|f| (f.dim, f.incident_rays));
        let index: HashMap<RaySet, usize> = faces.iter().enumerate().map(|(i, f)| (f.incident_rays, i)).collect();
        let covers: Vec<Vec<usize>> = faces
            .iter()
            .map(|f| {
                let subs: Vec<RaySet> = sets
                    .iter()
                    .map(|&g| f.incident_rays & g)
                    .filter(|&h| h != f.incident_rays)
                    .collect::<HashSet<_>>()
                    .into_iter()
                    .collect();
                let mut maximal: Vec<usize> = subs
                    .iter()
                    .filter(|&&h| !subs.iter().any(|&k| k != h && k & h == h))
                    .map(|h| index[h])
                    .collect();
                maximal.sort_unstable();
                maximal
            })
            .collect();
        Ok(FaceLattice { faces, covers, lin_dim: self.lin_dim })
    }

    pub fn face_to_model(&self, face: &Face) -> Vec<CIStatement> {
        let st = self.statements();
        (0..st.len()).filter(|i| face.incident_rays >> i & 1 == 1).map(|i| st[i]).collect()
    }

    pub fn ray_set(&self, stmts: &[CIStatement]) -> Result<RaySet> {
        let mut s = 0u64;
        for t in stmts {
            let i = self
                .matrix
                .column_of(t)
                .ok_or_else(|| Error::domain(format!("{t} is not an elementary statement over n = {}", self.n)))?;
            s |= 1 << i;
        }
        Ok(s)
    }

    /// Smallest face containing the given rays (intersection of the facets containing them).
    pub fn closure(&self, rays: RaySet, facets: &[Facet]) -> RaySet {
        facets.iter().filter(|f| f.incident_rays & rays == rays).fold(self.full_set(), |acc, f| acc & f.incident_rays)
    }

    pub fn is_face(&self, stmts: &[CIStatement], facets: &[Facet]) -> Result<bool> {
        let s = self.ray_set(stmts)?;
        Ok(self.closure(s, facets) == s)
    }
}

/// Columns of the inverse of a square integer matrix (rows `m`), each scaled
/// to a primitive integer vector: `⟨col_j, row_i⟩ = c_j·δ_ij` with `c_j > 0`.
fn inverse_columns(m: &[Vec<i64>]) -> Result<Vec<Vec<i128>>> {
    let d = m.len();
    // Gauss–Jordan over rationals represented as i128 fractions via fraction-free updates
    let mut a: Vec<Vec<num_rational::Ratio<i128>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<num_rational::Ratio<i128>> = row.iter().map(|&x| (x as i128).into()).collect();
            r.extend((0..d).map(|j| num_rational::Ratio::from_integer((i == j) as i128)));
            r
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&i| a[i][c] != 0.into()).ok_or_else(|| Error::Internal("singular seed".into()))?;
        a.swap(c, p);
        let piv = a[c][c];
        a[c].iter_mut().for_each(|x| *x /= piv);
        for i in 0..d {
            if i != c && a[i][c] != 0.into() {
                let f = a[i][c];
                let src = a[c].clone();
                a[i].iter_mut().zip(src).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    // inverse X with M X = I; column j of X satisfies ⟨row_i, X_j⟩ = δ_ij
    Ok((0..d)
        .map(|j| {
            let col: Vec<num_rational::Ratio<i128>> = (0..d).map(|i| a[i][d + j]).collect();
            let l = col.iter().fold(1i128, |l, x| l.lcm(x.denom()));
            let mut v: Vec<i128> = col.iter().map(|x| x.numer() * (l / x.denom())).collect();
            gcd_normalize(&mut v);
            v
        })
        .collect())
}

impl FaceLattice {
    /// Face counts by dimension `0..=lin_dim` (apex included).
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0usize; self.lin_dim + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    pub fn total(&self) -> usize {
        self.faces.len()
    }

    /// Every cover relation joins consecutive dimensions and every face
    /// above the apex covers something.
    pub fn is_graded(&self) -> bool {
        self.faces.iter().zip(&self.covers).all(|(f, cs)| {
            (f.dim == 0 || !cs.is_empty()) && cs.iter().all(|&c| self.faces[c].dim + 1 == f.dim)
        })
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    pub fn contains(&self, rays: RaySet) -> bool {
        self.faces.binary_search_by_key(&rays, |f| f.incident_rays).is_ok()
            || self.faces.iter().any(|f| f.incident_rays == rays)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lin_dim": self.lin_dim,
            "f_vector": self.f_vector(),
            "total": self.total(),
            "faces": self.faces.iter().map(|f| serde_json::json!({
                "dim": f.dim,
                "rays": (0..64).filter(|i| f.incident_rays >> i & 1 == 1).collect::<Vec<u32>>(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Hasse diagram in DOT; faces labelled by their statements.
    pub fn to_dot(&self, cone: &Cone) -> String {
        let st = cone.statements();
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box, fontsize=9];\n");
        for (i, f) in self.faces.iter().enumerate() {
            let label: Vec<String> = (0..st.len()).filter(|k| f.incident_rays >> k & 1 == 1).map(|k| st[k].to_string()).collect();
            let label = if label.is_empty() { "0".to_string() } else { label.join("\\n") };
            out.push_str(&format!("  f{i} [label=\"{label}\", group=d{}];\n", f.dim));
        }
        for (i, cs) in self.covers.iter().enumerate() {
            for &c in cs {
                out.push_str(&format!("  f{c} -> f{i};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}
