//! Quiver representations over 𝔽_p: exact linear algebra, Hom and Ext¹
//! spaces via the standard two-term complex, submodule enumeration with
//! constructive bounds, and extension middle terms.
//!
//! Vectors are columns; a map V → W is a (dim W × dim V) matrix.

use crate::quiver::{DimVector, IQuiver};

fn inv_mod(a: u32, p: u32) -> u32 {
    // p prime, a ≠ 0
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Dense matrix over 𝔽_p (p a small prime), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMat {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = FpMat::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<u32>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.into_iter().map(|x| x % p));
        }
        FpMat { p, rows: r, cols: c, data }
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = FpMat::zero(p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c) % p);
            }
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, rhs: &FpMat) -> FpMat {
        assert_eq!(self.p, rhs.p);
        assert_eq!(self.cols, rhs.rows);
        let p = self.p as u64;
        let mut out = FpMat::zero(self.p, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let idx = r * rhs.cols + c;
                    out.data[idx] =
                        ((out.data[idx] as u64 + a * rhs.get(k, c) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols, self.p), (rhs.rows, rhs.cols, rhs.p));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&rhs.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn sub(&self, rhs: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols, self.p), (rhs.rows, rhs.cols, rhs.p));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&rhs.data) {
            *a = (*a + self.p - b) % self.p;
        }
        out
    }

    pub fn transpose(&self) -> FpMat {
        FpMat::from_fn(self.p, self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn hstack(&self, rhs: &FpMat) -> FpMat {
        assert_eq!(self.rows, rhs.rows);
        FpMat::from_fn(self.p, self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                rhs.get(r, c - self.cols)
            }
        })
    }

    pub fn vstack(&self, rhs: &FpMat) -> FpMat {
        assert_eq!(self.cols, rhs.cols);
        FpMat::from_fn(self.p, self.rows + rhs.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c)
            } else {
                rhs.get(r - self.rows, c)
            }
        })
    }

    /// Reduced row echelon form with zero rows trimmed; returns pivot columns.
    pub fn rref(&self) -> (FpMat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            for c in 0..m.cols {
                let (a, b) = (m.get(row, c), m.get(pr, c));
                m.set(row, c, b);
                m.set(pr, c, a);
            }
            let inv = inv_mod(m.get(row, col), p);
            for c in 0..m.cols {
                m.set(row, c, ((m.get(row, c) as u64 * inv as u64) % p as u64) as u32);
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let f = m.get(r, col) as u64;
                    for c in 0..m.cols {
                        let v = (m.get(r, c) as u64 + (p as u64 - f) * m.get(row, c) as u64)
                            % p as u64;
                        m.set(r, c, v as u32);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == m.rows {
                break;
            }
        }
        m.rows = row;
        m.data.truncate(row * m.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : self·x = 0} as matrix columns (ncols × nullity).
    pub fn kernel(&self) -> FpMat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FpMat::zero(self.p, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, fc);
                if v != 0 {
                    out.set(pc, k, self.p - v);
                }
            }
        }
        out
    }

    /// Solves self·X = b; `None` if inconsistent.
    pub fn solve_right(&self, b: &FpMat) -> Option<FpMat> {
        assert_eq!(self.rows, b.rows);
        let (r, pivots) = self.hstack(b).rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = FpMat::zero(self.p, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, r.get(i, self.cols + c));
            }
        }
        Some(x)
    }

    /// Full-row-rank P with P·self = 0, rows spanning coker(self) coordinates.
    pub fn cokernel_projection(&self) -> FpMat {
        self.transpose().kernel().transpose()
    }

    pub fn row_vec(&self, r: usize) -> Vec<u32> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }
}

impl std::fmt::Debug for FpMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FpMat(p={},{}x{})[", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "{:?}", self.row_vec(r))?;
        }
        write!(f, "]")
    }
}

/// Odometer over all vectors in 𝔽_p^len.
pub struct VecIter {
    p: u32,
    cur: Option<Vec<u32>>,
}

impl VecIter {
    pub fn new(p: u32, len: usize) -> Self {
        VecIter { p, cur: Some(vec![0; len]) }
    }
}

impl Iterator for VecIter {
    type Item = Vec<u32>;
    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.cur.take()?;
        let mut next = cur.clone();
        for d in next.iter_mut() {
            *d += 1;
            if *d < self.p {
                self.cur = Some(next);
                return Some(cur);
            }
            *d = 0;
        }
        Some(cur)
    }
}

/// All subspaces of 𝔽_p^d as RREF basis-row matrices (includes 0 and the
/// full space), in a fixed deterministic order.
pub fn subspaces_echelon(p: u32, d: usize) -> Vec<FpMat> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        let pivots: Vec<usize> = (0..d).filter(|&c| mask >> c & 1 == 1).collect();
        let k = pivots.len();
        // free entries: row i, non-pivot columns right of pivots[i]
        let mut free = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..d {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        for vals in VecIter::new(p, free.len()) {
            let mut m = FpMat::zero(p, k, d);
            for (i, &pc) in pivots.iter().enumerate() {
                m.set(i, pc, 1);
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                m.set(r, c, v);
            }
            out.push(m);
        }
    }
    out
}

/// A representation of a fixed quiver over 𝔽_p; `maps` parallels
/// `quiver.arrows()`, with `maps[a]: V_i → V_j` for the arrow a: i → j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuiverRep {
    pub p: u32,
    pub dims: Vec<usize>,
    pub maps: Vec<FpMat>,
}

impl QuiverRep {
    pub fn zero(q: &IQuiver, p: u32) -> Self {
        let dims = vec![0; q.vertex_count()];
        let maps = q.arrows().iter().map(|_| FpMat::zero(p, 0, 0)).collect();
        QuiverRep { p, dims, maps }
    }

    pub fn simple(q: &IQuiver, p: u32, i: usize) -> Self {
        let mut dims = vec![0; q.vertex_count()];
        dims[i] = 1;
        let maps = q
            .arrows()
            .iter()
            .map(|&(s, t)| FpMat::zero(p, dims[t], dims[s]))
            .collect();
        QuiverRep { p, dims, maps }
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector(self.dims.iter().map(|&d| d as i64).collect())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn direct_sum(&self, other: &QuiverRep) -> QuiverRep {
        assert_eq!(self.p, other.p);
        assert_eq!(self.dims.len(), other.dims.len());
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| {
                let mut m = FpMat::zero(self.p, a.nrows() + b.nrows(), a.ncols() + b.ncols());
                for r in 0..a.nrows() {
                    for c in 0..a.ncols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.nrows() {
                    for c in 0..b.ncols() {
                        m.set(a.nrows() + r, a.ncols() + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        QuiverRep { p: self.p, dims, maps }
    }

    pub fn validate(&self, q: &IQuiver) {
        assert_eq!(self.dims.len(), q.vertex_count());
        assert_eq!(self.maps.len(), q.arrows().len());
        for (m, &(s, t)) in self.maps.iter().zip(q.arrows()) {
            assert_eq!((m.nrows(), m.ncols()), (self.dims[t], self.dims[s]));
            assert_eq!(m.prime(), self.p);
        }
    }
}

/// Matrix of d: ⊕_i Hom(X_i, Z_i) → ⊕_{a: i→j} Hom(X_i, Z_j),
/// d(φ)_a = Z_a φ_i − φ_j X_a.  Hom(X, Z) = ker d; Ext¹(X, Z) = coker d.
/// Unknowns and targets are vectorized row-major per block.
pub fn intertwiner_matrix(q: &IQuiver, x: &QuiverRep, z: &QuiverRep) -> FpMat {
    let p = x.p;
    assert_eq!(p, z.p);
    let n = q.vertex_count();
    let mut unk_off = vec![0usize; n + 1];
    for i in 0..n {
        unk_off[i + 1] = unk_off[i] + z.dims[i] * x.dims[i];
    }
    let mut tgt_off = vec![0usize];
    for &(s, t) in q.arrows() {
        tgt_off.push(tgt_off.last().unwrap() + z.dims[t] * x.dims[s]);
    }
    let mut d = FpMat::zero(p, *tgt_off.last().unwrap(), unk_off[n]);
    for (a, &(i, j)) in q.arrows().iter().enumerate() {
        let za = &z.maps[a];
        let xa = &x.maps[a];
        for r in 0..z.dims[j] {
            for c in 0..x.dims[i] {
                let row = tgt_off[a] + r * x.dims[i] + c;
                // (Z_a φ_i)[r][c] = Σ_s Z_a[r][s] φ_i[s][c]
                for s in 0..z.dims[i] {
                    let col = unk_off[i] + s * x.dims[i] + c;
                    let v = (d.get(row, col) + za.get(r, s)) % p;
                    d.set(row, col, v);
                }
                // −(φ_j X_a)[r][c] = −Σ_s φ_j[r][s] X_a[s][c]
                for s in 0..x.dims[j] {
                    let col = unk_off[j] + r * x.dims[j] + s;
                    let v = (d.get(row, col) + p - xa.get(s, c)) % p;
                    d.set(row, col, v);
                }
            }
        }
    }
    d
}

pub fn hom_dim(q: &IQuiver, x: &QuiverRep, z: &QuiverRep) -> usize {
    let d = intertwiner_matrix(q, x, z);
    d.ncols() - d.rank()
}

pub fn ext_dim(q: &IQuiver, x: &QuiverRep, z: &QuiverRep) -> usize {
    let d = intertwiner_matrix(q, x, z);
    d.nrows() - d.rank()
}

/// One representative cocycle per class of Ext¹(X, Z): the vectors supported
/// on the complement coordinates of im(d).  Each item is one matrix
/// η_a: X_i → Z_j per arrow.  Streaming, since there are p^{ext} classes.
pub fn ext_cocycle_iter<'a>(
    q: &'a IQuiver,
    x: &'a QuiverRep,
    z: &'a QuiverRep,
) -> impl Iterator<Item = Vec<FpMat>> + 'a {
    let p = x.p;
    let d = intertwiner_matrix(q, x, z);
    let (_, pivots) = d.transpose().rref();
    let free: Vec<usize> = (0..d.nrows()).filter(|r| !pivots.contains(r)).collect();
    let nrows = d.nrows();
    let mut tgt_off = vec![0usize];
    for &(s, t) in q.arrows() {
        tgt_off.push(tgt_off.last().unwrap() + z.dims[t] * x.dims[s]);
    }
    VecIter::new(p, free.len()).map(move |vals| {
        let mut full = vec![0u32; nrows];
        for (&coord, &v) in free.iter().zip(&vals) {
            full[coord] = v;
        }
        q.arrows()
            .iter()
            .enumerate()
            .map(|(a, &(i, j))| {
                FpMat::from_fn(p, z.dims[j], x.dims[i], |r, c| {
                    full[tgt_off[a] + r * x.dims[i] + c]
                })
            })
            .collect()
    })
}

pub fn ext_cocycle_reps(q: &IQuiver, x: &QuiverRep, z: &QuiverRep) -> Vec<Vec<FpMat>> {
    ext_cocycle_iter(q, x, z).collect()
}

/// Middle term of the extension of X by Z along the cocycle η:
/// E_i = Z_i ⊕ X_i, E_a = [[Z_a, η_a], [0, X_a]].
pub fn extension_middle(q: &IQuiver, x: &QuiverRep, z: &QuiverRep, eta: &[FpMat]) -> QuiverRep {
    let p = x.p;
    let dims: Vec<usize> = z.dims.iter().zip(&x.dims).map(|(a, b)| a + b).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(i, j))| {
            FpMat::from_fn(p, dims[j], dims[i], |r, c| {
                let (zr, zc) = (z.dims[j], z.dims[i]);
                if r < zr && c < zc {
                    z.maps[a].get(r, c)
                } else if r < zr {
                    eta[a].get(r, c - zc)
                } else if c >= zc {
                    x.maps[a].get(r - zr, c - zc)
                } else {
                    0
                }
            })
        })
        .collect();
    QuiverRep { p, dims, maps }
}

/// A submodule, stored as one RREF basis-row matrix per vertex.
pub type SubBasis = Vec<FpMat>;

/// All submodules U ⊆ M, optionally restricted to a fixed dimension vector.
/// Vertices are processed in linear order; at each vertex the admissible
/// subspaces are exactly those between the span of already-forced images and
/// the intersection of preimage constraints from already-processed targets.
pub fn submodules(q: &IQuiver, m: &QuiverRep, target: Option<&DimVector>) -> Vec<SubBasis> {
    let n = q.vertex_count();
    if let Some(t) = target {
        assert_eq!(t.len(), n);
        if !t.is_nonnegative() || (0..n).any(|i| t.0[i] > m.dims[i] as i64) {
            return Vec::new();
        }
    }
    let mut results = Vec::new();
    let mut partial: SubBasis = Vec::new();
    rec_submodules(q, m, target, 0, &mut partial, &mut results);
    results
}

fn rec_submodules(
    q: &IQuiver,
    m: &QuiverRep,
    target: Option<&DimVector>,
    v: usize,
    partial: &mut SubBasis,
    results: &mut Vec<SubBasis>,
) {
    let p = m.p;
    if v == q.vertex_count() {
        results.push(partial.clone());
        return;
    }
    let d = m.dims[v];
    // lower bound: images of processed sources along in-arrows
    let mut lower_rows: Vec<Vec<u32>> = Vec::new();
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        if t == v && s < v {
            let img = partial[s].mul(&m.maps[a].transpose()); // rows = images
            for r in 0..img.nrows() {
                lower_rows.push(img.row_vec(r));
            }
        }
    }
    let lower = if lower_rows.is_empty() {
        FpMat::zero(p, 0, d)
    } else {
        FpMat::from_rows(p, lower_rows).rref().0
    };
    // upper bound: preimages of processed targets along out-arrows
    let mut constraint_rows: Vec<Vec<u32>> = Vec::new();
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        if s == v && t < v {
            let proj = cokernel_of_rows(&partial[t]);
            let comp = proj.mul(&m.maps[a]);
            for r in 0..comp.nrows() {
                constraint_rows.push(comp.row_vec(r));
            }
        }
    }
    let upper = if constraint_rows.is_empty() {
        FpMat::identity(p, d)
    } else {
        FpMat::from_rows(p, constraint_rows).kernel().transpose().rref().0
    };
    // need lower ⊆ upper
    let w = lower.nrows();
    let vp = upper.nrows();
    if w > vp || upper.vstack(&lower).rank() != vp {
        return;
    }
    // complement of lower inside upper
    let mut comp_rows: Vec<Vec<u32>> = Vec::new();
    let mut acc = lower.clone();
    for r in 0..vp {
        let cand = FpMat::from_rows(p, vec![upper.row_vec(r)]);
        let ext = acc.vstack(&cand);
        if ext.rank() > acc.nrows() {
            comp_rows.push(upper.row_vec(r));
            acc = ext.rref().0;
        }
    }
    let qdim = vp - w;
    debug_assert_eq!(comp_rows.len(), qdim);
    for s in subspaces_echelon(p, qdim) {
        let k = w + s.nrows();
        if let Some(t) = target {
            if t.0[v] != k as i64 {
                continue;
            }
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for r in 0..lower.nrows() {
            rows.push(lower.row_vec(r));
        }
        for r in 0..s.nrows() {
            // lift: combination of complement rows
            let mut vrow = vec![0u32; d];
            for c in 0..qdim {
                let f = s.get(r, c) as u64;
                if f == 0 {
                    continue;
                }
                for (x, &y) in vrow.iter_mut().zip(&comp_rows[c]) {
                    *x = ((*x as u64 + f * y as u64) % p as u64) as u32;
                }
            }
            rows.push(vrow);
        }
        let basis = if rows.is_empty() {
            FpMat::zero(p, 0, d)
        } else {
            FpMat::from_rows(p, rows).rref().0
        };
        debug_assert_eq!(basis.nrows(), k);
        partial.push(basis);
        rec_submodules(q, m, target, v + 1, partial, results);
        partial.pop();
    }
}

/// Projection 𝔽_p^d → 𝔽_p^d / rowspace(basis), as a full-row-rank matrix.
fn cokernel_of_rows(basis: &FpMat) -> FpMat {
    basis.transpose().cokernel_projection()
}

/// The submodule U as a representation in its own right.
pub fn sub_rep(q: &IQuiver, m: &QuiverRep, u: &SubBasis) -> QuiverRep {
    let p = m.p;
    let dims: Vec<usize> = u.iter().map(FpMat::nrows).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| {
            let img = m.maps[a].mul(&u[s].transpose()); // columns = images
            u[t].transpose()
                .solve_right(&img)
                .expect("submodule not closed under the action")
        })
        .collect();
    QuiverRep { p, dims, maps }
}

/// The quotient M/U as a representation.
pub fn quotient_rep(q: &IQuiver, m: &QuiverRep, u: &SubBasis) -> QuiverRep {
    let p = m.p;
    let projs: Vec<FpMat> = u.iter().map(cokernel_of_rows).collect();
    let sections: Vec<FpMat> = projs
        .iter()
        .map(|pr| {
            pr.solve_right(&FpMat::identity(p, pr.nrows()))
                .expect("projection is surjective")
        })
        .collect();
    let dims: Vec<usize> = projs.iter().map(FpMat::nrows).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| projs[t].mul(&m.maps[a]).mul(&sections[s]))
        .collect();
    QuiverRep { p, dims, maps }
}
