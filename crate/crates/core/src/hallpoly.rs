//! Generic Hall polynomials in q = v², by exact interpolation from
//! finite-field counts, together with closed-form automorphism polynomials
//! and the derived quantities the algebra layers need.

use crate::counting::{CountError, ModelCtx};
use crate::roots::{Isoclass, RootSystem};
use crate::scalar::{HalfLaurent, RationalFn, ScalarError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HallError {
    #[error("interpolation unstable: {0}")]
    InterpolationUnstable(String),
    #[error("class is not ϱ-symmetric: {0}")]
    NotRhoSymmetric(String),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Fit primes (held out: 2 and 3, for independent verification).
const SAMPLE_PRIMES: [u32; 20] = [
    5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
];

/// |Aut(M(β)^{⊕m})| = v^{m(3m−1)/2}(v−v⁻¹)^m [m]!  for a real root β.
pub fn aut_line(m: u64) -> HalfLaurent {
    let m = m as i64;
    let mut out = HalfLaurent::v_pow(m * (3 * m - 1) / 2);
    let factor = &HalfLaurent::v_pow(1) - &HalfLaurent::v_pow(-1);
    for _ in 0..m {
        out = &out * &factor;
    }
    &out * &crate::scalar::qfact(m).expect("m ≥ 0")
}

/// |Aut(M(λ))| as a polynomial in v (a polynomial in q = v²).
pub fn aut_poly(rs: &RootSystem, iso: &Isoclass) -> HalfLaurent {
    let parts: Vec<(usize, u64)> = iso.0.iter().map(|(&r, &m)| (r, m)).collect();
    let mut cross = 0i64;
    for (i, &(r, mr)) in parts.iter().enumerate() {
        for &(t, mt) in &parts[i + 1..] {
            cross += 2 * (mr * mt) as i64 * rs.hom_roots(r, t) as i64;
        }
    }
    let mut out = HalfLaurent::v_pow(cross);
    for &(_, m) in &parts {
        out = &out * &aut_line(m);
    }
    out
}

/// b_λ(v) with b_λ² = a_λ, defined for ϱ-symmetric λ supported away from
/// the ϱ-fixed roots; the product runs over one representative per orbit.
pub fn sqrt_aut_poly(rs: &RootSystem, iso: &Isoclass) -> Result<HalfLaurent, HallError> {
    if rs.rho_isoclass(iso) != *iso {
        return Err(HallError::NotRhoSymmetric(rs.isoclass_string(iso)));
    }
    let mut reps: Vec<(usize, u64)> = Vec::new();
    for (&r, &m) in &iso.0 {
        if rs.is_fixed_root(r) {
            return Err(HallError::NotRhoSymmetric(format!(
                "{} has ϱ-fixed support",
                rs.isoclass_string(iso)
            )));
        }
        if r < rs.rho_root(r) {
            reps.push((r, m));
        }
    }
    let mut cross = 0i64;
    for (i, &(r, mr)) in reps.iter().enumerate() {
        for &(t, mt) in &reps[i + 1..] {
            let h = rs.hom_roots(r, t) + rs.hom_roots(r, rs.rho_root(t));
            cross += 2 * (mr * mt) as i64 * h as i64;
        }
    }
    let mut out = HalfLaurent::v_pow(cross);
    for &(_, m) in &reps {
        out = &out * &aut_line(m);
    }
    Ok(out)
}

/// a_{2λ}(v) / a_λ(v²), in closed form.
pub fn ratio_a2f(rs: &RootSystem, iso: &Isoclass) -> HalfLaurent {
    let parts: Vec<(usize, u64)> = iso.0.iter().map(|(&r, &m)| (r, m)).collect();
    let mut cross = 0i64;
    for (i, &(r, mr)) in parts.iter().enumerate() {
        for &(t, mt) in &parts[i + 1..] {
            cross += 4 * (mr * mt) as i64 * rs.hom_roots(r, t) as i64;
        }
    }
    let mut out = HalfLaurent::v_pow(cross);
    let vminus = &HalfLaurent::v_pow(1) - &HalfLaurent::v_pow(-1);
    for &(_, m) in &parts {
        let m = m as i64;
        out = &out * &HalfLaurent::v_pow(3 * m * m);
        for _ in 0..m {
            out = &out * &vminus;
        }
        let dd = crate::scalar::qdfact(2 * m - 1).expect("odd double factorial");
        out = &out * &dd;
    }
    out
}

/// {λ, μ} = dim Hom(λ, μ) + dim Hom(μ, λ).
pub fn brace(rs: &RootSystem, a: &Isoclass, b: &Isoclass) -> u64 {
    rs.hom_isoclasses(a, b) + rs.hom_isoclasses(b, a)
}

/// Evaluates a polynomial in q = v² at q = p.
pub fn eval_q(f: &HalfLaurent, p: u32) -> BigInt {
    let (a, b) = f
        .eval_at_sqrt_prime(p)
        .expect("polynomial in q has integral v-powers");
    assert!(b.is_zero(), "polynomial in q has no odd v-powers");
    assert!(a.is_integer());
    a.to_integer()
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Lagrange interpolation through (xᵢ, yᵢ); returns coefficients in q.
fn interpolate(points: &[(u32, BigInt)]) -> Vec<BigRational> {
    let n = points.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // numerator Π_{j≠i} (x − x_j), denominator Π_{j≠i} (x_i − x_j)
        let mut num = vec![BigRational::one()];
        let mut den = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            let xj_r = BigRational::from(BigInt::from(*xj));
            let mut next = vec![BigRational::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xj_r;
            }
            num = next;
            den *= BigRational::from(BigInt::from(*xi)) - xj_r;
        }
        let scale = BigRational::from(yi.clone()) / den;
        for (k, c) in num.into_iter().enumerate() {
            coeffs[k] += c * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    coeffs
}

type PairKey = (Isoclass, Isoclass);
type TotalsMap = BTreeMap<Isoclass, HalfLaurent>;

/// Table of generic Hall polynomials f^ν_{λμ} (λ the quotient class, μ the
/// submodule class), interpolated from counts over 𝔽_p and certified on a
/// held-out sample prime.  Optionally persisted as JSON, keyed by a
/// fingerprint of the quiver.
pub struct HallTable<'a> {
    rs: &'a RootSystem,
    memo: RefCell<BTreeMap<PairKey, TotalsMap>>,
    cache_file: Option<PathBuf>,
}

impl<'a> HallTable<'a> {
    pub fn new(rs: &'a RootSystem) -> Self {
        let dir = std::env::var_os("HALLQ_CACHE_DIR").map(PathBuf::from);
        Self::with_cache_dir(rs, dir)
    }

    pub fn with_cache_dir(rs: &'a RootSystem, dir: Option<PathBuf>) -> Self {
        let cache_file = dir.map(|d| {
            d.join(format!("hall-{:016x}.json", fnv1a(&rs.quiver().canonical_string())))
        });
        let table = HallTable { rs, memo: RefCell::new(BTreeMap::new()), cache_file };
        table.load_cache();
        table
    }

    fn load_cache(&self) {
        let Some(path) = &self.cache_file else { return };
        let Ok(text) = std::fs::read_to_string(path) else { return };
        let Ok(json) = serde_json::from_str::<serde_json::Value>(&text) else { return };
        if json.get("schema").and_then(|v| v.as_i64()) != Some(1) {
            return;
        }
        if json.get("quiver").and_then(|v| v.as_str())
            != Some(self.rs.quiver().canonical_string().as_str())
        {
            return;
        }
        let Some(entries) = json.get("entries").and_then(|v| v.as_object()) else { return };
        let mut memo = self.memo.borrow_mut();
        for (key, totals) in entries {
            let Some((quot_s, sub_s)) = key.split_once('|') else { continue };
            let (Ok(quot), Ok(sub)) =
                (self.rs.parse_isoclass(quot_s), self.rs.parse_isoclass(sub_s))
            else {
                continue;
            };
            let Some(totals) = totals.as_object() else { continue };
            let mut map = TotalsMap::new();
            let mut ok = true;
            for (total_s, poly) in totals {
                match (
                    self.rs.parse_isoclass(total_s),
                    serde_json::from_value::<HalfLaurent>(poly.clone()),
                ) {
                    (Ok(total), Ok(f)) => {
                        map.insert(total, f);
                    }
                    _ => ok = false,
                }
            }
            if ok {
                memo.insert((quot, sub), map);
            }
        }
    }

    fn save_cache(&self) {
        let Some(path) = &self.cache_file else { return };
        let memo = self.memo.borrow();
        let mut entries = serde_json::Map::new();
        for ((quot, sub), totals) in memo.iter() {
            let key = format!(
                "{}|{}",
                self.rs.isoclass_string(quot),
                self.rs.isoclass_string(sub)
            );
            let mut obj = serde_json::Map::new();
            for (total, f) in totals {
                obj.insert(
                    self.rs.isoclass_string(total),
                    serde_json::to_value(f).expect("laurent serializes"),
                );
            }
            entries.insert(key, serde_json::Value::Object(obj));
        }
        let json = serde_json::json!({
            "schema": 1,
            "quiver": self.rs.quiver().canonical_string(),
            "entries": entries,
        });
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        let _ = std::fs::write(path, serde_json::to_string_pretty(&json).unwrap());
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rs
    }

    /// All f^ν_{λμ} for fixed (λ, μ), keyed by ν.
    pub fn pairwise(&self, quot: &Isoclass, sub: &Isoclass) -> Result<TotalsMap, HallError> {
        let key = (quot.clone(), sub.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let computed = self.compute_pair(quot, sub)?;
        self.memo.borrow_mut().insert(key, computed.clone());
        self.save_cache();
        Ok(computed)
    }

    fn compute_pair(&self, quot: &Isoclass, sub: &Isoclass) -> Result<TotalsMap, HallError> {
        if quot.is_zero() || sub.is_zero() {
            let other = if quot.is_zero() { sub } else { quot };
            return Ok(TotalsMap::from([(other.clone(), HalfLaurent::one())]));
        }
        // degree bound: deg_q f^ν_{λμ} ≤ dim Hom(μ, λ)
        let bound = self.rs.hom_isoclasses(sub, quot) as usize;
        let fit = &SAMPLE_PRIMES[..bound + 1];
        let check_prime = SAMPLE_PRIMES[bound + 1];
        let mut samples: Vec<(u32, BTreeMap<Isoclass, BigInt>)> = Vec::new();
        for &p in fit.iter().chain([&check_prime]) {
            samples.push((p, self.sample_counts(quot, sub, p)?));
        }
        let mut keys: Vec<Isoclass> = Vec::new();
        for (_, counts) in &samples {
            for k in counts.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
        let mut out = TotalsMap::new();
        for total in keys {
            let points: Vec<(u32, BigInt)> = samples[..fit.len()]
                .iter()
                .map(|(p, counts)| (*p, counts.get(&total).cloned().unwrap_or_default()))
                .collect();
            let coeffs = interpolate(&points);
            let mut f = HalfLaurent::zero();
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_integer() {
                    return Err(HallError::InterpolationUnstable(format!(
                        "non-integer coefficient for total {}",
                        self.rs.isoclass_string(&total)
                    )));
                }
                f += &HalfLaurent::monomial(c.to_integer(), 4 * k as i64);
            }
            let (p_check, check_counts) = &samples[fit.len()];
            let expected = check_counts.get(&total).cloned().unwrap_or_default();
            if eval_q(&f, *p_check) != expected {
                return Err(HallError::InterpolationUnstable(format!(
                    "held-out prime {} disagrees for total {}",
                    p_check,
                    self.rs.isoclass_string(&total)
                )));
            }
            if !f.is_zero() {
                out.insert(total, f);
            }
        }
        Ok(out)
    }

    /// F^ν_{λμ}(p) for all ν at one prime, through extension-class counts:
    /// F = (|Ext¹(λ,μ)_ν| / |Hom(λ,μ)|) · a_ν / (a_λ a_μ).
    fn sample_counts(
        &self,
        quot: &Isoclass,
        sub: &Isoclass,
        p: u32,
    ) -> Result<BTreeMap<Isoclass, BigInt>, HallError> {
        let ctx = ModelCtx::new(self.rs, p);
        let ext_counts = ctx.ext_class_counts(quot, sub)?;
        let hom = self.rs.hom_isoclasses(quot, sub) as u32;
        let p_hom = BigInt::from(p).pow(hom);
        let a_quot = eval_q(&aut_poly(self.rs, quot), p);
        let a_sub = eval_q(&aut_poly(self.rs, sub), p);
        let mut out = BTreeMap::new();
        for (total, count) in ext_counts {
            let a_total = eval_q(&aut_poly(self.rs, &total), p);
            let num = count * a_total;
            let den = &p_hom * &a_quot * &a_sub;
            let f = BigRational::new(num, den);
            assert!(f.is_integer() && !f.is_negative(), "Hall count must be in ℕ");
            out.insert(total, f.to_integer());
        }
        Ok(out)
    }

    pub fn f_poly(
        &self,
        total: &Isoclass,
        quot: &Isoclass,
        sub: &Isoclass,
    ) -> Result<HalfLaurent, HallError> {
        Ok(self.pairwise(quot, sub)?.get(total).cloned().unwrap_or_default())
    }

    /// g^ν_{λμ} = f^ν_{λμ} a_λ a_μ / a_ν.
    pub fn g_rat(
        &self,
        total: &Isoclass,
        quot: &Isoclass,
        sub: &Isoclass,
    ) -> Result<RationalFn, HallError> {
        let f = self.f_poly(total, quot, sub)?;
        let num = &(&f * &aut_poly(self.rs, quot)) * &aut_poly(self.rs, sub);
        Ok(RationalFn::new(num, aut_poly(self.rs, total))?)
    }

    /// Iterated f^ν_{λ₁,…,λₙ} = Σ_L f^ν_{λ₁,L} f^L_{λ₂,…,λₙ}.
    pub fn iterated_f(
        &self,
        total: &Isoclass,
        parts: &[Isoclass],
    ) -> Result<HalfLaurent, HallError> {
        let Some((first, rest)) = parts.split_first() else {
            return Ok(if total.is_zero() { HalfLaurent::one() } else { HalfLaurent::zero() });
        };
        if rest.is_empty() {
            return Ok(if total == first { HalfLaurent::one() } else { HalfLaurent::zero() });
        }
        let sub_dim =
            &self.rs.dim_of_isoclass(total) - &self.rs.dim_of_isoclass(first);
        if !sub_dim.is_nonnegative() {
            return Ok(HalfLaurent::zero());
        }
        let mut acc = HalfLaurent::zero();
        for l in self.rs.isoclasses_with_dim(&sub_dim) {
            let outer = self.f_poly(total, first, &l)?;
            if outer.is_zero() {
                continue;
            }
            let inner = self.iterated_f(&l, rest)?;
            acc += &(&outer * &inner);
        }
        Ok(acc)
    }

    /// Iterated g^ν_{λ₁,…,λₙ} = f^ν_{λ₁,…,λₙ} · Π a_{λᵢ} / a_ν.
    pub fn iterated_g(
        &self,
        total: &Isoclass,
        parts: &[Isoclass],
    ) -> Result<RationalFn, HallError> {
        let f = self.iterated_f(total, parts)?;
        let mut num = f;
        for part in parts {
            num = &num * &aut_poly(self.rs, part);
        }
        Ok(RationalFn::new(num, aut_poly(self.rs, total))?)
    }

    /// Human-readable summary of one pair's polynomials.
    pub fn describe_pair(&self, quot: &Isoclass, sub: &Isoclass) -> Result<String, HallError> {
        let mut s = String::new();
        for (total, f) in self.pairwise(quot, sub)? {
            let _ = writeln!(
                s,
                "f^{{{}}}_{{{}, {}}} = {}",
                self.rs.isoclass_string(&total),
                self.rs.isoclass_string(quot),
                self.rs.isoclass_string(sub),
                f
            );
        }
        Ok(s)
    }
}
