//! Counting over 𝔽_p: building modules from isoclasses, recognizing
//! isoclasses by Hom fingerprints, filtration counts (Hall numbers),
//! extension-class counts, and automorphism group orders.

use crate::ffrep::{
    ext_cocycle_iter, extension_middle, hom_dim, quotient_rep, sub_rep, submodules, QuiverRep,
};
use crate::roots::{Isoclass, RootSystem};
use num_bigint::BigInt;
use num_traits::One;
use std::cell::RefCell;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("module recognition failed: {0}")]
    RecognitionFailure(String),
    #[error("count too large for brute enumeration: {0}")]
    TooLarge(String),
}

/// Everything needed to count over one finite field 𝔽_p.
pub struct ModelCtx<'a> {
    rs: &'a RootSystem,
    p: u32,
    reps: Vec<QuiverRep>,
    inj_memo: RefCell<BTreeMap<(Isoclass, Isoclass), BigInt>>,
}

impl<'a> ModelCtx<'a> {
    pub fn new(rs: &'a RootSystem, p: u32) -> Self {
        let reps = rs.indecomposables(p);
        ModelCtx { rs, p, reps, inj_memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rs
    }

    pub fn rep(&self, r: usize) -> &QuiverRep {
        &self.reps[r]
    }

    /// Block-diagonal module of the class, summands in admissible order.
    pub fn build_module(&self, iso: &Isoclass) -> QuiverRep {
        let mut m = QuiverRep::zero(self.rs.plain_quiver(), self.p);
        for (&r, &mult) in &iso.0 {
            for _ in 0..mult {
                m = m.direct_sum(&self.reps[r]);
            }
        }
        m
    }

    /// Recognizes a module by its Hom fingerprint against the unitriangular
    /// table dim Hom(M(β_r), M(β_t)).
    pub fn isoclass_of(&self, m: &QuiverRep) -> Result<Isoclass, CountError> {
        let nr = self.rs.len();
        let q = self.rs.plain_quiver();
        let h: Vec<i64> = (0..nr)
            .map(|r| hom_dim(q, &self.reps[r], m) as i64)
            .collect();
        let mut mult = vec![0i64; nr];
        for r in (0..nr).rev() {
            let mut acc = h[r];
            for t in r + 1..nr {
                acc -= mult[t] * self.rs.hom_roots(r, t) as i64;
            }
            if acc < 0 {
                return Err(CountError::RecognitionFailure(format!(
                    "negative multiplicity at root {r}"
                )));
            }
            mult[r] = acc;
        }
        let mut iso = Isoclass::zero();
        for (r, &m_r) in mult.iter().enumerate() {
            iso.add(r, m_r as u64);
        }
        if self.rs.dim_of_isoclass(&iso) != m.dim_vector() {
            return Err(CountError::RecognitionFailure(
                "fingerprint does not match the dimension vector".into(),
            ));
        }
        Ok(iso)
    }

    /// F^M_{λ₁,…,λₙ}: number of flags M = U₀ ⊇ … ⊇ Uₙ = 0 with
    /// U_{k−1}/U_k ≅ λ_k.
    pub fn count_filtrations(
        &self,
        m: &QuiverRep,
        parts: &[Isoclass],
    ) -> Result<BigInt, CountError> {
        let Some((first, rest)) = parts.split_first() else {
            return Ok(if m.is_zero() { BigInt::one() } else { BigInt::ZERO });
        };
        let sub_dim = &m.dim_vector() - &self.rs.dim_of_isoclass(first);
        if !sub_dim.is_nonnegative() {
            return Ok(BigInt::ZERO);
        }
        let q = self.rs.plain_quiver();
        let mut total = BigInt::ZERO;
        for u in submodules(q, m, Some(&sub_dim)) {
            if &self.isoclass_of(&quotient_rep(q, m, &u))? == first {
                total += self.count_filtrations(&sub_rep(q, m, &u), rest)?;
            }
        }
        Ok(total)
    }

    /// Same, starting from an isoclass.
    pub fn count_filtrations_of(
        &self,
        total: &Isoclass,
        parts: &[Isoclass],
    ) -> Result<BigInt, CountError> {
        self.count_filtrations(&self.build_module(total), parts)
    }

    /// |Ext¹(X, Z)_Y| for every middle-term class Y at once.
    /// Enumerates the p^{ext(X,Z)} extension classes.
    pub fn ext_class_counts(
        &self,
        x: &Isoclass,
        z: &Isoclass,
    ) -> Result<BTreeMap<Isoclass, BigInt>, CountError> {
        let q = self.rs.plain_quiver();
        let xm = self.build_module(x);
        let zm = self.build_module(z);
        let e = crate::ffrep::ext_dim(q, &xm, &zm) as u32;
        if (self.p as f64).powi(e as i32) > 2.5e8 {
            return Err(CountError::TooLarge(format!(
                "p^ext = {}^{e} extension classes",
                self.p
            )));
        }
        let mut out: BTreeMap<Isoclass, BigInt> = BTreeMap::new();
        for eta in ext_cocycle_iter(q, &xm, &zm) {
            let mid = extension_middle(q, &xm, &zm, &eta);
            let iso = self.isoclass_of(&mid)?;
            *out.entry(iso).or_insert(BigInt::ZERO) += 1;
        }
        Ok(out)
    }

    /// Number of injective module homomorphisms X ↪ N, by exclusion over
    /// nonzero submodules: inj(X, N) = p^{hom(X,N)} − Σ_{0≠U⊆X} inj(X/U, N).
    fn inj_count(&self, x: &QuiverRep, n_iso: &Isoclass, n: &QuiverRep) -> Result<BigInt, CountError> {
        let x_iso = self.isoclass_of(x)?;
        let key = (x_iso, n_iso.clone());
        if let Some(v) = self.inj_memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let q = self.rs.plain_quiver();
        let mut total = BigInt::from(self.p).pow(hom_dim(q, x, n) as u32);
        // group submodules by quotient class
        let mut quot_counts: BTreeMap<Isoclass, BigInt> = BTreeMap::new();
        for u in submodules(q, x, None) {
            if u.iter().all(|b| b.nrows() == 0) {
                continue;
            }
            let quot = self.isoclass_of(&quotient_rep(q, x, &u))?;
            *quot_counts.entry(quot).or_insert(BigInt::ZERO) += 1;
        }
        for (quot, count) in quot_counts {
            total -= count * self.inj_count(&self.build_module(&quot), n_iso, n)?;
        }
        self.inj_memo.borrow_mut().insert(key, total.clone());
        Ok(total)
    }

    /// |Aut(M)| by brute enumeration (verification-sized inputs only).
    pub fn aut_count(&self, iso: &Isoclass) -> Result<BigInt, CountError> {
        let m = self.build_module(iso);
        if self.p > 7 || m.total_dim() > 8 {
            return Err(CountError::TooLarge(format!(
                "|Aut| enumeration at p = {}, dim = {}",
                self.p,
                m.total_dim()
            )));
        }
        self.inj_count(&m, iso, &m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{DimVector, IQuiver};

    fn a1() -> IQuiver {
        IQuiver::new(1, vec![], vec![0]).unwrap()
    }

    fn a2() -> IQuiver {
        IQuiver::new(2, vec![(0, 1)], vec![0, 1]).unwrap()
    }

    #[test]
    fn a1_counts() {
        let q = a1();
        let rs = RootSystem::new(&q);
        let ctx = ModelCtx::new(&rs, 2);
        let m = |k: u64| Isoclass::with_mult(0, k);
        assert_eq!(ctx.aut_count(&m(1)).unwrap(), BigInt::from(1));
        assert_eq!(ctx.aut_count(&m(2)).unwrap(), BigInt::from(6));
        assert_eq!(ctx.aut_count(&m(3)).unwrap(), BigInt::from(168));
        assert_eq!(ctx.aut_count(&m(4)).unwrap(), BigInt::from(20160));
        // Gaussian binomial [5 choose 3] at q = 2
        let f = ctx.count_filtrations_of(&m(5), &[m(2), m(3)]).unwrap();
        assert_eq!(f, BigInt::from(155));
        // extensions all split
        let counts = ctx.ext_class_counts(&m(2), &m(3)).unwrap();
        assert_eq!(counts, BTreeMap::from([(m(5), BigInt::one())]));
    }

    #[test]
    fn a2_recognition_and_counts() {
        for p in [2, 3] {
            let q = a2();
            let rs = RootSystem::new(&q);
            let ctx = ModelCtx::new(&rs, p);
            for iso in rs.isoclasses_up_to(4) {
                let m = ctx.build_module(&iso);
                assert_eq!(ctx.isoclass_of(&m).unwrap(), iso);
            }
            let s1 = rs.parse_isoclass("[1,0]").unwrap();
            let s2 = rs.parse_isoclass("[0,1]").unwrap();
            let m12 = rs.parse_isoclass("[1,1]").unwrap();
            // unique composition series of M₁₂: top S₁, socle S₂
            assert_eq!(
                ctx.count_filtrations_of(&m12, &[s1.clone(), s2.clone()]).unwrap(),
                BigInt::one()
            );
            assert_eq!(
                ctx.count_filtrations_of(&m12, &[s2.clone(), s1.clone()]).unwrap(),
                BigInt::ZERO
            );
            let split = s1.plus(&s2);
            assert_eq!(
                ctx.count_filtrations_of(&split, &[s1.clone(), s2.clone()]).unwrap(),
                BigInt::one()
            );
            assert_eq!(
                ctx.count_filtrations_of(&split, &[s2.clone(), s1.clone()]).unwrap(),
                BigInt::one()
            );
            // p lines in (M₁₂ ⊕ S₂)₂ have quotient M₁₂
            let big = m12.plus(&s2);
            assert_eq!(
                ctx.count_filtrations_of(&big, &[m12.clone(), s2.clone()]).unwrap(),
                BigInt::from(p)
            );
            // Ext¹(S₁, S₂) has p − 1 nonsplit classes, all with middle M₁₂
            let counts = ctx.ext_class_counts(&s1, &s2).unwrap();
            assert_eq!(
                counts,
                BTreeMap::from([
                    (split.clone(), BigInt::one()),
                    (m12.clone(), BigInt::from(p - 1)),
                ])
            );
            assert_eq!(
                ctx.ext_class_counts(&s2, &s1).unwrap(),
                BTreeMap::from([(split.clone(), BigInt::one())])
            );
            // |Aut| agrees with the hand side: End(M₁₂⊕S₂) units
            assert_eq!(ctx.aut_count(&m12).unwrap(), BigInt::from(p - 1));
            assert_eq!(ctx.aut_count(&split).unwrap(), BigInt::from((p - 1) * (p - 1)));
            assert_eq!(
                ctx.aut_count(&big).unwrap(),
                BigInt::from(p * (p - 1) * (p - 1))
            );
        }
    }

    #[test]
    fn zero_class_edge_cases() {
        let q = a2();
        let rs = RootSystem::new(&q);
        let ctx = ModelCtx::new(&rs, 2);
        let zero = Isoclass::zero();
        let s1 = rs.parse_isoclass("[1,0]").unwrap();
        assert_eq!(ctx.count_filtrations_of(&zero, &[]).unwrap(), BigInt::one());
        assert_eq!(ctx.count_filtrations_of(&s1, &[]).unwrap(), BigInt::ZERO);
        // zero parts in the middle of a sequence are allowed
        assert_eq!(
            ctx.count_filtrations_of(&s1, &[zero.clone(), s1.clone()]).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            ctx.ext_class_counts(&zero, &s1).unwrap(),
            BTreeMap::from([(s1.clone(), BigInt::one())])
        );
        assert_eq!(ctx.aut_count(&zero).unwrap(), BigInt::one());
        let dim0 = ctx.build_module(&zero);
        assert_eq!(dim0.dim_vector(), DimVector(vec![0, 0]));
    }
}
