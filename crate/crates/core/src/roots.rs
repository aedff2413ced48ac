//! Positive roots and indecomposable representations via reflection
//! functors, admissible orders compatible with the involution, and
//! isomorphism classes as multisets of positive roots.

use crate::ffrep::{hom_dim, FpMat, QuiverRep};
use crate::quiver::{DimVector, IQuiver, QuiverError};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Simple reflection s_i(x) = x − (x, αᵢ)αᵢ on the root lattice of the
/// underlying graph (orientation-independent).
fn reflect_dim(q: &IQuiver, x: &DimVector, i: usize) -> DimVector {
    let alpha = DimVector::unit(q.vertex_count(), i);
    let c = q.sym_form(x, &alpha);
    let mut out = x.clone();
    out.0[i] -= c;
    out
}

/// Arrows of s_i Q: every arrow incident to i reversed.
fn reflect_arrows(arrows: &[(usize, usize)], i: usize) -> Vec<(usize, usize)> {
    arrows
        .iter()
        .map(|&(s, t)| if s == i || t == i { (t, s) } else { (s, t) })
        .collect()
}

/// Vertex ordering by repeated removal of the smallest-index sink.
fn sink_removal_order(q: &IQuiver) -> Vec<usize> {
    let n = q.vertex_count();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .find(|&v| {
                !removed[v]
                    && q.arrows()
                        .iter()
                        .all(|&(s, t)| removed[t] || s != v || removed[s])
            })
            .expect("acyclic quiver always has a sink");
        removed[next] = true;
        order.push(next);
    }
    order
}

/// BGP reflection at a source i: new representation over s_i Q.
fn reflect_source(q: &IQuiver, rep: &QuiverRep, i: usize) -> (IQuiver, QuiverRep) {
    let p = rep.p;
    assert!(
        q.arrows().iter().all(|&(_, t)| t != i),
        "reflection vertex must be a source"
    );
    let out_arrows: Vec<usize> = (0..q.arrows().len())
        .filter(|&a| q.arrows()[a].0 == i)
        .collect();
    // ψ: M_i → ⊕ M_{t_a}, stacked in arrow order
    let mut psi = FpMat::zero(p, 0, rep.dims[i]);
    for &a in &out_arrows {
        psi = psi.vstack(&rep.maps[a]);
    }
    let proj = psi.cokernel_projection();
    let new_dim_i = proj.nrows();

    let mut pairs: Vec<((usize, usize), FpMat)> = Vec::new();
    let mut offset = 0usize;
    let mut block_of = BTreeMap::new();
    for &a in &out_arrows {
        let t = q.arrows()[a].1;
        block_of.insert(a, offset);
        offset += rep.dims[t];
    }
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        if s == i {
            let off = block_of[&a];
            let block =
                FpMat::from_fn(p, new_dim_i, rep.dims[t], |r, c| proj.get(r, off + c));
            pairs.push(((t, i), block));
        } else {
            pairs.push(((s, t), rep.maps[a].clone()));
        }
    }
    pairs.sort_by_key(|(st, _)| *st);
    let arrows: Vec<(usize, usize)> = pairs.iter().map(|(st, _)| *st).collect();
    let maps: Vec<FpMat> = pairs.into_iter().map(|(_, m)| m).collect();
    let rq = plain_quiver(q.vertex_count(), arrows);
    let mut dims = rep.dims.clone();
    dims[i] = new_dim_i;
    let new_rep = QuiverRep { p, dims, maps };
    new_rep.validate(&rq);
    (rq, new_rep)
}

fn plain_quiver(n: usize, arrows: Vec<(usize, usize)>) -> IQuiver {
    IQuiver::new(n, arrows, (0..n).collect()).expect("reflected quiver stays Dynkin")
}

/// All indecomposables in the reflection (Coxeter) order, at the prime p.
fn indecomposables_reflection_order(q: &IQuiver, p: u32) -> Vec<(DimVector, QuiverRep)> {
    let n = q.vertex_count();
    let expected = q.positive_root_count().expect("valid Dynkin quiver");
    let order = sink_removal_order(q);
    let plain = plain_quiver(n, q.arrows().to_vec());
    // Q^(0), Q^(1), … with Q^(j) = s_{i_j} Q^(j−1)
    let mut quivers = vec![plain];
    let mut out: Vec<(DimVector, QuiverRep)> = Vec::new();
    let mut k = 0usize;
    while out.len() < expected {
        k += 1;
        assert!(k <= 64 * n, "root enumeration did not terminate");
        let ik = order[(k - 1) % n];
        let mut beta = DimVector::unit(n, ik);
        for j in (1..k).rev() {
            beta = reflect_dim(q, &beta, order[(j - 1) % n]);
        }
        if !beta.is_nonnegative() {
            // that component is exhausted
            assert!(beta.0.iter().all(|&x| x <= 0));
            continue;
        }
        while quivers.len() < k {
            let j = quivers.len();
            let arrows = reflect_arrows(quivers[j - 1].arrows(), order[(j - 1) % n]);
            quivers.push(plain_quiver(n, arrows));
        }
        assert!(
            quivers[k - 1].arrows().iter().all(|&(s, _)| s != ik),
            "expected a sink at step {k}"
        );
        let mut m = QuiverRep::simple(&quivers[k - 1], p, ik);
        for j in (1..k).rev() {
            let (_, refl) = reflect_source(&quivers[j], &m, order[(j - 1) % n]);
            m = refl;
        }
        assert_eq!(m.dim_vector(), beta, "module dimension must match the root");
        out.push((beta, m));
    }
    out
}

/// The positive root system of an iquiver, indexed in a ϱ-admissible order:
/// Hom only forward, Ext¹ only backward, and each ϱ-orbit contiguous.
pub struct RootSystem {
    quiver: IQuiver,
    plain: IQuiver,
    roots: Vec<DimVector>,
    index: BTreeMap<DimVector, usize>,
    hom: Vec<Vec<usize>>,
    ext: Vec<Vec<usize>>,
    rho_perm: Vec<usize>,
    refl_of_adm: Vec<usize>,
}

impl RootSystem {
    pub fn new(q: &IQuiver) -> RootSystem {
        let n = q.vertex_count();
        let base = indecomposables_reflection_order(q, 2);
        let nr = base.len();
        let plain = plain_quiver(n, q.arrows().to_vec());
        let mut hom_refl = vec![vec![0usize; nr]; nr];
        for r in 0..nr {
            for t in 0..nr {
                hom_refl[r][t] = hom_dim(&plain, &base[r].1, &base[t].1);
            }
        }
        let idx_refl: BTreeMap<DimVector, usize> =
            base.iter().enumerate().map(|(i, (b, _))| (b.clone(), i)).collect();
        assert_eq!(idx_refl.len(), nr, "roots must be distinct");
        let rho_refl: Vec<usize> = base
            .iter()
            .map(|(b, _)| idx_refl[&q.rho_dim(b)])
            .collect();
        // flat conditions already hold for the reflection order
        let mut ext_refl = vec![vec![0usize; nr]; nr];
        for r in 0..nr {
            assert_eq!(hom_refl[r][r], 1);
            for t in 0..nr {
                let e = hom_refl[r][t] as i64 - q.euler_form(&base[r].0, &base[t].0);
                assert!(e >= 0);
                ext_refl[r][t] = e as usize;
                if hom_refl[r][t] > 0 {
                    assert!(r <= t, "Hom must point forward in the reflection order");
                }
                if e > 0 {
                    assert!(r > t, "Ext must point backward in the reflection order");
                }
            }
        }
        let seq = admissible_interleaving(nr, &rho_refl, &hom_refl, &ext_refl, false);
        let roots: Vec<DimVector> = seq.iter().map(|&r| base[r].0.clone()).collect();
        let index: BTreeMap<DimVector, usize> =
            roots.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let mut hom = vec![vec![0usize; nr]; nr];
        let mut ext = vec![vec![0usize; nr]; nr];
        for i in 0..nr {
            for j in 0..nr {
                hom[i][j] = hom_refl[seq[i]][seq[j]];
                ext[i][j] =
                    (hom[i][j] as i64 - q.euler_form(&roots[i], &roots[j])) as usize;
            }
        }
        let rho_perm: Vec<usize> = (0..nr).map(|i| index[&q.rho_dim(&roots[i])]).collect();
        let rs = RootSystem {
            quiver: q.clone(),
            plain,
            roots,
            index,
            hom,
            ext,
            rho_perm,
            refl_of_adm: seq,
        };
        rs.assert_admissible(&(0..nr).collect::<Vec<_>>());
        rs
    }

    fn assert_admissible(&self, order: &[usize]) {
        let nr = self.len();
        assert_eq!(order.len(), nr);
        let pos: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        for i in 0..nr {
            for j in 0..nr {
                if self.hom[i][j] > 0 {
                    assert!(pos[&i] <= pos[&j], "Hom must point forward");
                }
                if self.ext[i][j] > 0 {
                    assert!(pos[&i] > pos[&j], "Ext must point backward");
                }
            }
        }
        // ϱ-orbits contiguous
        let mut p = 0;
        while p < nr {
            let i = order[p];
            if self.rho_perm[i] == i {
                p += 1;
            } else {
                assert_eq!(order[p + 1], self.rho_perm[i], "orbit must be contiguous");
                p += 2;
            }
        }
    }

    pub fn quiver(&self) -> &IQuiver {
        &self.quiver
    }

    /// The same quiver with the trivial involution (for linear algebra).
    pub fn plain_quiver(&self) -> &IQuiver {
        &self.plain
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> &DimVector {
        &self.roots[i]
    }

    pub fn roots(&self) -> &[DimVector] {
        &self.roots
    }

    pub fn root_index(&self, b: &DimVector) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// dim Hom(M(β_i), M(β_j)) — field-independent.
    pub fn hom_roots(&self, i: usize, j: usize) -> usize {
        self.hom[i][j]
    }

    /// dim Ext¹(M(β_i), M(β_j)) — field-independent.
    pub fn ext_roots(&self, i: usize, j: usize) -> usize {
        self.ext[i][j]
    }

    pub fn rho_root(&self, i: usize) -> usize {
        self.rho_perm[i]
    }

    pub fn is_fixed_root(&self, i: usize) -> bool {
        self.rho_perm[i] == i
    }

    /// Indecomposables at the prime p, in the admissible order.
    pub fn indecomposables(&self, p: u32) -> Vec<QuiverRep> {
        let base = indecomposables_reflection_order(&self.quiver, p);
        self.refl_of_adm.iter().map(|&r| base[r].1.clone()).collect()
    }

    /// A second admissible order (a permutation of root indices), for
    /// order-independence checks; differs from the canonical one when the
    /// constraints leave any freedom.
    pub fn alt_order(&self) -> Vec<usize> {
        let seq = admissible_interleaving(self.len(), &self.rho_perm, &self.hom, &self.ext, true);
        self.assert_admissible(&seq);
        seq
    }

    /// ϱ-orbits in admissible position order (each block contiguous).
    pub fn orbit_blocks(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.len() {
            if self.rho_perm[i] == i {
                out.push(vec![i]);
                i += 1;
            } else {
                out.push(vec![i, i + 1]);
                i += 2;
            }
        }
        out
    }

    pub fn isoclass_string(&self, iso: &Isoclass) -> String {
        if iso.0.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (&r, &m)) in iso.0.iter().enumerate() {
            if k > 0 {
                s.push('+');
            }
            let _ = write!(s, "{}", self.roots[r]);
            if m > 1 {
                let _ = write!(s, "^{m}");
            }
        }
        s
    }

    pub fn parse_isoclass(&self, text: &str) -> Result<Isoclass, QuiverError> {
        let text = text.trim();
        if text == "0" {
            return Ok(Isoclass::zero());
        }
        let mut iso = Isoclass::zero();
        // split on '+' at depth 0 only ("[1,0]+[0,1]" vs commas inside brackets)
        let mut depth = 0i32;
        let mut part = String::new();
        let mut parts = Vec::new();
        for c in text.chars() {
            match c {
                '[' => {
                    depth += 1;
                    part.push(c);
                }
                ']' => {
                    depth -= 1;
                    part.push(c);
                }
                '+' if depth == 0 => {
                    parts.push(std::mem::take(&mut part));
                }
                _ => part.push(c),
            }
        }
        parts.push(part);
        for piece in parts {
            let piece = piece.trim();
            let (vec_part, mult) = match piece.split_once('^') {
                Some((v, m)) => {
                    let mult: u64 = m
                        .trim()
                        .parse()
                        .map_err(|_| QuiverError::ParseError(format!("bad multiplicity in `{piece}`")))?;
                    (v.trim(), mult)
                }
                None => (piece, 1),
            };
            let inner = vec_part
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| {
                    QuiverError::ParseError(format!("expected `[d1,...,dn]` in `{piece}`"))
                })?;
            let dims: Vec<i64> = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|x| x.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| QuiverError::ParseError(format!("bad dimension in `{piece}`")))?
            };
            let dv = DimVector(dims);
            if dv.len() != self.quiver.vertex_count() {
                return Err(QuiverError::DimensionMismatch {
                    expected: self.quiver.vertex_count(),
                    got: dv.len(),
                });
            }
            let r = self.root_index(&dv).ok_or_else(|| {
                QuiverError::ParseError(format!("{dv} is not a positive root"))
            })?;
            iso.add(r, mult);
        }
        Ok(iso)
    }

    /// Image of an isoclass under ϱ.
    pub fn rho_isoclass(&self, iso: &Isoclass) -> Isoclass {
        let mut out = Isoclass::zero();
        for (&r, &m) in &iso.0 {
            out.add(self.rho_perm[r], m);
        }
        out
    }

    pub fn dim_of_isoclass(&self, iso: &Isoclass) -> DimVector {
        let mut d = DimVector::zero(self.quiver.vertex_count());
        for (&r, &m) in &iso.0 {
            d = &d + &self.roots[r].scaled(m as i64);
        }
        d
    }

    /// dim Hom(M(λ), M(μ)) by bilinearity.
    pub fn hom_isoclasses(&self, a: &Isoclass, b: &Isoclass) -> u64 {
        let mut total = 0u64;
        for (&r, &m) in &a.0 {
            for (&t, &k) in &b.0 {
                total += m * k * self.hom[r][t] as u64;
            }
        }
        total
    }

    /// All isoclasses with the given dimension vector.
    pub fn isoclasses_with_dim(&self, d: &DimVector) -> Vec<Isoclass> {
        let mut out = Vec::new();
        let mut cur = Isoclass::zero();
        self.rec_classes(d.clone(), 0, &mut cur, &mut out);
        out
    }

    fn rec_classes(
        &self,
        remaining: DimVector,
        from: usize,
        cur: &mut Isoclass,
        out: &mut Vec<Isoclass>,
    ) {
        if remaining.is_zero() {
            out.push(cur.clone());
            return;
        }
        if from == self.len() || !remaining.is_nonnegative() {
            return;
        }
        // max multiplicity of root `from` inside `remaining`
        let beta = &self.roots[from];
        let mut max_m = i64::MAX;
        for i in 0..beta.len() {
            if beta[i] > 0 {
                max_m = max_m.min(remaining[i] / beta[i]);
            }
        }
        for m in (0..=max_m).rev() {
            let rest = &remaining - &beta.scaled(m);
            if !rest.is_nonnegative() {
                continue;
            }
            if m > 0 {
                cur.add(from, m as u64);
            }
            self.rec_classes(rest, from + 1, cur, out);
            if m > 0 {
                cur.remove(from, m as u64);
            }
        }
    }

    /// All isoclasses of total dimension ≤ bound.
    pub fn isoclasses_up_to(&self, bound: i64) -> Vec<Isoclass> {
        let n = self.quiver.vertex_count();
        let mut dims = vec![DimVector::zero(n)];
        let mut all = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        while let Some(d) = dims.pop() {
            if !seen.insert(d.clone()) {
                continue;
            }
            all.extend(self.isoclasses_with_dim(&d));
            if d.height() < bound {
                for i in 0..n {
                    let mut next = d.clone();
                    next.0[i] += 1;
                    dims.push(next);
                }
            }
        }
        all.sort();
        all.dedup();
        all
    }
}

/// Greedy interleaving: repeatedly place the first (or last, for the
/// alternative order) ϱ-orbit all of whose members have no Ext¹ to, and no
/// Hom from, any remaining root.
fn admissible_interleaving(
    nr: usize,
    rho: &[usize],
    hom: &[Vec<usize>],
    ext: &[Vec<usize>],
    take_last: bool,
) -> Vec<usize> {
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; nr];
    for r in 0..nr {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if rho[r] == r {
            orbits.push(vec![r]);
        } else {
            seen[rho[r]] = true;
            // within each pair Hom and Ext¹ vanish both ways, so either
            // member may come first; keep the given order
            assert_eq!(hom[r][rho[r]] + hom[rho[r]][r], 0);
            assert_eq!(ext[r][rho[r]] + ext[rho[r]][r], 0);
            orbits.push(vec![r, rho[r]]);
        }
    }
    let mut remaining: Vec<usize> = (0..orbits.len()).collect();
    let mut out = Vec::with_capacity(nr);
    while !remaining.is_empty() {
        // orbit o may precede all others iff for each member g and each
        // still-unplaced root d outside o: ext(g, d) = 0 and hom(d, g) = 0
        let candidates: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&o| {
                orbits[o].iter().all(|&g| {
                    remaining.iter().all(|&o2| {
                        o2 == o
                            || orbits[o2]
                                .iter()
                                .all(|&d| hom[d][g] == 0 && ext[g][d] == 0)
                    })
                })
            })
            .collect();
        assert!(!candidates.is_empty(), "no admissible interleaving step");
        let pick = if take_last {
            *candidates.last().unwrap()
        } else {
            candidates[0]
        };
        out.extend(orbits[pick].iter().copied());
        remaining.retain(|&o| o != pick);
    }
    out
}

/// An isomorphism class of representations: positive-root index ↦
/// multiplicity (absent = 0).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Isoclass(pub BTreeMap<usize, u64>);

impl Isoclass {
    pub fn zero() -> Isoclass {
        Isoclass(BTreeMap::new())
    }

    pub fn single(r: usize) -> Isoclass {
        Isoclass(BTreeMap::from([(r, 1)]))
    }

    pub fn with_mult(r: usize, m: u64) -> Isoclass {
        if m == 0 {
            Isoclass::zero()
        } else {
            Isoclass(BTreeMap::from([(r, m)]))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&mut self, r: usize, m: u64) {
        if m > 0 {
            *self.0.entry(r).or_insert(0) += m;
        }
    }

    pub fn remove(&mut self, r: usize, m: u64) {
        let e = self.0.get_mut(&r).expect("removing absent part");
        assert!(*e >= m);
        *e -= m;
        if *e == 0 {
            self.0.remove(&r);
        }
    }

    pub fn mult(&self, r: usize) -> u64 {
        self.0.get(&r).copied().unwrap_or(0)
    }

    pub fn plus(&self, other: &Isoclass) -> Isoclass {
        let mut out = self.clone();
        for (&r, &m) in &other.0 {
            out.add(r, m);
        }
        out
    }

    /// Number of indecomposable summands.
    pub fn summand_count(&self) -> u64 {
        self.0.values().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> IQuiver {
        IQuiver::new(2, vec![(0, 1)], vec![0, 1]).unwrap()
    }

    fn a3_quasi() -> IQuiver {
        IQuiver::new(3, vec![(0, 1), (2, 1)], vec![2, 1, 0]).unwrap()
    }

    fn dv(v: &[i64]) -> DimVector {
        DimVector(v.to_vec())
    }

    #[test]
    fn a2_order_and_tables() {
        let rs = RootSystem::new(&a2());
        assert_eq!(rs.roots(), &[dv(&[0, 1]), dv(&[1, 1]), dv(&[1, 0])]);
        // S₂ ⊆ M₁₂ with quotient S₁
        assert_eq!(rs.hom_roots(0, 1), 1);
        assert_eq!(rs.hom_roots(1, 2), 1);
        assert_eq!(rs.hom_roots(0, 2), 0);
        assert_eq!(rs.ext_roots(2, 0), 1);
        assert_eq!(rs.ext_roots(0, 2), 0);
        assert_eq!(rs.ext_roots(2, 1), 0);
        for i in 0..3 {
            assert!(rs.is_fixed_root(i));
        }
        assert_eq!(rs.alt_order(), vec![0, 1, 2]);
    }

    #[test]
    fn a3_quasi_split_order() {
        let rs = RootSystem::new(&a3_quasi());
        assert_eq!(rs.len(), 6);
        assert_eq!(
            rs.roots(),
            &[
                dv(&[0, 1, 0]),
                dv(&[1, 1, 0]),
                dv(&[0, 1, 1]),
                dv(&[1, 1, 1]),
                dv(&[0, 0, 1]),
                dv(&[1, 0, 0]),
            ]
        );
        assert_eq!(rs.rho_root(1), 2);
        assert_eq!(rs.rho_root(4), 5);
        assert!(rs.is_fixed_root(0) && rs.is_fixed_root(3));
        assert_eq!(rs.orbit_blocks(), vec![vec![0], vec![1, 2], vec![3], vec![4, 5]]);
    }

    #[test]
    fn larger_types_and_doubles() {
        let d4 = IQuiver::new(4, vec![(0, 1), (2, 1), (3, 1)], vec![0, 1, 2, 3]).unwrap();
        assert_eq!(RootSystem::new(&d4).len(), 12);
        let e6 = IQuiver::new(
            6,
            vec![(0, 1), (1, 2), (3, 2), (4, 3), (5, 2)],
            (0..6).collect(),
        )
        .unwrap();
        assert_eq!(RootSystem::new(&e6).len(), 36);
        // the diagonal double of A₂: swap pairs roots across the two copies
        let rs = RootSystem::new(&a2().double());
        assert_eq!(rs.len(), 6);
        for i in 0..6 {
            assert!(!rs.is_fixed_root(i));
            assert_eq!(rs.rho_root(rs.rho_root(i)), i);
        }
        // here the orbit order is forced, so the alternative order agrees
        assert_eq!(rs.alt_order(), (0..6).collect::<Vec<_>>());
        // in split A₃ the two middle-length roots are incomparable
        let a3_split = IQuiver::new(3, vec![(0, 1), (2, 1)], vec![0, 1, 2]).unwrap();
        let rs3 = RootSystem::new(&a3_split);
        assert_ne!(rs3.alt_order(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn indecomposables_match_roots() {
        for p in [2, 3, 5] {
            let rs = RootSystem::new(&a3_quasi());
            let reps = rs.indecomposables(p);
            for (i, m) in reps.iter().enumerate() {
                assert_eq!(&m.dim_vector(), rs.root(i));
            }
            // hom tables are field-independent
            for i in 0..rs.len() {
                for j in 0..rs.len() {
                    assert_eq!(
                        hom_dim(rs.plain_quiver(), &reps[i], &reps[j]),
                        rs.hom_roots(i, j)
                    );
                }
            }
        }
    }

    #[test]
    fn isoclass_roundtrip() {
        let rs = RootSystem::new(&a2());
        let iso = rs.parse_isoclass("[1,1]^2+[0,1]").unwrap();
        assert_eq!(iso.summand_count(), 3);
        assert_eq!(rs.dim_of_isoclass(&iso), dv(&[2, 3]));
        assert_eq!(rs.isoclass_string(&iso), "[0,1]+[1,1]^2");
        let back = rs.parse_isoclass(&rs.isoclass_string(&iso)).unwrap();
        assert_eq!(back, iso);
        assert_eq!(rs.parse_isoclass("0").unwrap(), Isoclass::zero());
        assert!(rs.parse_isoclass("[2,1]").is_err());
        assert!(rs.parse_isoclass("[1]").is_err());
    }

    #[test]
    fn class_enumeration() {
        let rs = RootSystem::new(&a2());
        assert_eq!(rs.isoclasses_with_dim(&dv(&[1, 1])).len(), 2);
        assert_eq!(rs.isoclasses_with_dim(&dv(&[2, 1])).len(), 2);
        let all3 = rs.isoclasses_up_to(3);
        // multisets of {α₁, α₂, α₁+α₂} with total dimension ≤ 3
        assert!(all3.contains(&Isoclass::zero()));
        assert_eq!(all3.iter().filter(|i| rs.dim_of_isoclass(i).height() == 3).count(), 6);
        let rs3 = RootSystem::new(&a3_quasi());
        assert_eq!(rs3.isoclasses_with_dim(&dv(&[1, 1, 1])).len(), 4);
        // hom bilinearity
        let m = rs.parse_isoclass("[1,1]+[1,0]").unwrap();
        let s2 = rs.parse_isoclass("[0,1]").unwrap();
        assert_eq!(rs.hom_isoclasses(&s2, &m), 1);
        assert_eq!(rs.hom_isoclasses(&m, &s2), 0);
    }
}
