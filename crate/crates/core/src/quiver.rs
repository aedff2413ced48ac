//! Dynkin iquivers (Q, ϱ): the text format, ADE classification, involution
//! checks, Euler and symmetrized forms, and the diagonal double.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Index, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("not a Dynkin quiver: {0}")]
    NotDynkin(String),
    #[error("invalid involution: {0}")]
    InvolutionInvalid(String),
    #[error("excluded type: {0}")]
    ExcludedType(String),
    #[error("dimension vector length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quiver spec parse error: {0}")]
    ParseError(String),
}

/// A class in K₀(mod kQ) ≅ ℤ^I.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DimVector(pub Vec<i64>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// The simple class α_i.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Sum of components (height for positive vectors).
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, m: i64) -> Self {
        DimVector(self.0.iter().map(|x| x * m).collect())
    }

    /// All vectors 0 ≤ x ≤ self componentwise (self must be nonnegative).
    pub fn splits(&self) -> Vec<DimVector> {
        let mut out = vec![DimVector::zero(self.len())];
        for (i, &d) in self.0.iter().enumerate() {
            let mut next = Vec::new();
            for base in &out {
                for x in 0..=d {
                    let mut v = base.clone();
                    v.0[i] = x;
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}

impl Index<usize> for DimVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len());
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DimVector {
    type Output = DimVector;
    fn sub(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len());
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Simply-laced Dynkin type of one connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl DynkinType {
    pub fn positive_root_count(self) -> usize {
        match self {
            DynkinType::A(n) => n * (n + 1) / 2,
            DynkinType::D(n) => n * (n - 1),
            DynkinType::E(6) => 36,
            DynkinType::E(7) => 63,
            DynkinType::E(8) => 120,
            DynkinType::E(_) => unreachable!(),
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// One connected Dynkin component of the underlying graph.
#[derive(Debug, Clone)]
pub struct Component {
    pub dynkin_type: DynkinType,
    pub vertices: Vec<usize>,
}

/// A Dynkin iquiver: acyclic ADE quiver with an involutive automorphism.
#[derive(Clone, PartialEq, Eq)]
pub struct IQuiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
    rho: Vec<usize>,
    names: Vec<String>,
}

impl IQuiver {
    /// Builds and fully checks an iquiver (0-based vertices).
    pub fn new(
        n: usize,
        mut arrows: Vec<(usize, usize)>,
        rho: Vec<usize>,
    ) -> Result<Self, QuiverError> {
        arrows.sort_unstable();
        let names = (1..=n).map(|i| i.to_string()).collect();
        let q = IQuiver { n, arrows, rho, names };
        q.check()?;
        Ok(q)
    }

    fn check(&self) -> Result<(), QuiverError> {
        for &(s, t) in &self.arrows {
            if s >= self.n || t >= self.n {
                return Err(QuiverError::NotDynkin(format!(
                    "arrow ({},{}) out of range",
                    s + 1,
                    t + 1
                )));
            }
            if s == t {
                return Err(QuiverError::NotDynkin("loop arrow".into()));
            }
        }
        for w in self.arrows.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.0 == b.0 && a.1 == b.1) || (a.0 == b.1 && a.1 == b.0) {
                return Err(QuiverError::NotDynkin("parallel edge".into()));
            }
        }
        // also catches anti-parallel pairs that sorting left apart
        for (i, &(s, t)) in self.arrows.iter().enumerate() {
            for &(s2, t2) in &self.arrows[i + 1..] {
                if s == t2 && t == s2 {
                    return Err(QuiverError::NotDynkin("parallel edge".into()));
                }
            }
        }
        self.components()?;
        if self.rho.len() != self.n {
            return Err(QuiverError::InvolutionInvalid(format!(
                "permutation length {}, expected {}",
                self.rho.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for (i, &j) in self.rho.iter().enumerate() {
            if j >= self.n {
                return Err(QuiverError::InvolutionInvalid("image out of range".into()));
            }
            if seen[j] {
                return Err(QuiverError::InvolutionInvalid("not a permutation".into()));
            }
            seen[j] = true;
            if self.rho[j] != i {
                return Err(QuiverError::InvolutionInvalid("not an involution".into()));
            }
        }
        for &(s, t) in &self.arrows {
            let (rs, rt) = (self.rho[s], self.rho[t]);
            if !self.arrows.contains(&(rs, rt)) && !self.arrows.contains(&(rt, rs)) {
                return Err(QuiverError::InvolutionInvalid(format!(
                    "arrow ({},{}) has no image under the involution",
                    s + 1,
                    t + 1
                )));
            }
        }
        // quasi-split A_{2n} (an even chain reversed onto itself) is excluded,
        // and diagnosed before the direction check below would reject it
        for comp in self.components()? {
            if let DynkinType::A(m) = comp.dynkin_type {
                if m % 2 == 0 && comp.vertices.iter().any(|&v| self.rho[v] != v) {
                    let stays = comp.vertices.iter().all(|&v| comp.vertices.contains(&self.rho[v]));
                    if stays {
                        return Err(QuiverError::ExcludedType(format!(
                            "quasi-split A{m} (involution reverses an even chain)"
                        )));
                    }
                }
            }
        }
        for &(s, t) in &self.arrows {
            if !self.arrows.contains(&(self.rho[s], self.rho[t])) {
                return Err(QuiverError::InvolutionInvalid(format!(
                    "involution reverses the arrow ({},{})",
                    s + 1,
                    t + 1
                )));
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn rho(&self, i: usize) -> usize {
        self.rho[i]
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// I₀ = fixed vertices of ϱ.
    pub fn fixed_set(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.rho[i] == i).collect()
    }

    pub fn is_split(&self) -> bool {
        (0..self.n).all(|i| self.rho[i] == i)
    }

    /// Applies ϱ to a dimension vector.
    pub fn rho_dim(&self, a: &DimVector) -> DimVector {
        assert_eq!(a.len(), self.n);
        DimVector((0..self.n).map(|i| a.0[self.rho[i]]).collect())
    }

    /// Euler form ⟨a,b⟩_Q = Σᵢ aᵢbᵢ − Σ_{i→j} aᵢbⱼ.
    pub fn euler_form(&self, a: &DimVector, b: &DimVector) -> i64 {
        assert_eq!(a.len(), self.n);
        assert_eq!(b.len(), self.n);
        let diag: i64 = (0..self.n).map(|i| a.0[i] * b.0[i]).sum();
        let cross: i64 = self.arrows.iter().map(|&(s, t)| a.0[s] * b.0[t]).sum();
        diag - cross
    }

    /// Symmetrized form (a,b)_Q = ⟨a,b⟩ + ⟨b,a⟩; (αᵢ,αⱼ) is the Cartan matrix.
    pub fn sym_form(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.euler_form(a, b) + self.euler_form(b, a)
    }

    /// Connected components with their ADE types.
    pub fn components(&self) -> Result<Vec<Component>, QuiverError> {
        let mut adj = vec![Vec::new(); self.n];
        for &(s, t) in &self.arrows {
            adj[s].push(t);
            adj[t].push(s);
        }
        let mut comp_id = vec![usize::MAX; self.n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for start in 0..self.n {
            if comp_id[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut stack = vec![start];
            let mut verts = Vec::new();
            comp_id[start] = id;
            while let Some(v) = stack.pop() {
                verts.push(v);
                for &w in &adj[v] {
                    if comp_id[w] == usize::MAX {
                        comp_id[w] = id;
                        stack.push(w);
                    }
                }
            }
            verts.sort_unstable();
            comps.push(verts);
        }
        let mut out = Vec::new();
        for verts in comps {
            let edges = self
                .arrows
                .iter()
                .filter(|&&(s, _)| comp_id[s] == comp_id[verts[0]])
                .count();
            if edges + 1 != verts.len() {
                return Err(QuiverError::NotDynkin("component is not a tree".into()));
            }
            let dynkin_type = classify_tree(&verts, &adj)?;
            out.push(Component { dynkin_type, vertices: verts });
        }
        Ok(out)
    }

    /// Total |Φ⁺| across components.
    pub fn positive_root_count(&self) -> Result<usize, QuiverError> {
        Ok(self
            .components()?
            .iter()
            .map(|c| c.dynkin_type.positive_root_count())
            .sum())
    }

    /// The diagonal double Q ⊔ Q^◇ with the swap involution.
    pub fn double(&self) -> IQuiver {
        let n = self.n;
        let mut arrows = self.arrows.clone();
        arrows.extend(self.arrows.iter().map(|&(s, t)| (s + n, t + n)));
        arrows.sort_unstable();
        let rho = (0..2 * n).map(|i| (i + n) % (2 * n)).collect();
        let mut names = self.names.clone();
        names.extend(self.names.iter().map(|s| format!("{s}'")));
        IQuiver { n: 2 * n, arrows, rho, names }
    }

    /// Canonical one-line description (also the cache fingerprint input).
    pub fn canonical_string(&self) -> String {
        let arrows: Vec<String> =
            self.arrows.iter().map(|&(s, t)| format!("{}>{}", s, t)).collect();
        let rho: Vec<String> = self.rho.iter().map(|r| r.to_string()).collect();
        format!("v{};a{};r{}", self.n, arrows.join(","), rho.join(","))
    }

    /// Parses the quiver spec text format.
    pub fn parse(text: &str) -> Result<Self, QuiverError> {
        let mut n: Option<usize> = None;
        let mut arrows = Vec::new();
        let mut rho_pairs: Vec<(usize, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| QuiverError::ParseError(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("vertices") {
                let rest = rest.trim_start();
                let rest = rest
                    .strip_prefix('=')
                    .ok_or_else(|| err("expected `vertices = n`".into()))?;
                n = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| err("invalid vertex count".into()))?,
                );
            } else if let Some(rest) = line.strip_prefix("arrow") {
                arrows.push(parse_pair(rest).map_err(err)?);
            } else if let Some(rest) = line.strip_prefix("involution") {
                rho_pairs.push(parse_pair(rest).map_err(err)?);
            } else {
                return Err(err(format!("unrecognized directive `{line}`")));
            }
        }
        let n = n.ok_or_else(|| QuiverError::ParseError("missing `vertices = n`".into()))?;
        let to0 = |(a, b): (usize, usize)| -> Result<(usize, usize), QuiverError> {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(QuiverError::ParseError(format!(
                    "vertex out of range in ({a},{b})"
                )));
            }
            Ok((a - 1, b - 1))
        };
        let arrows = arrows.into_iter().map(to0).collect::<Result<Vec<_>, _>>()?;
        let mut rho: Vec<Option<usize>> = vec![None; n];
        for pair in rho_pairs {
            let (a, b) = to0(pair)?;
            for (x, y) in [(a, b), (b, a)] {
                if let Some(prev) = rho[x] {
                    if prev != y {
                        return Err(QuiverError::ParseError(format!(
                            "conflicting involution images for vertex {}",
                            x + 1
                        )));
                    }
                }
                rho[x] = Some(y);
            }
        }
        let rho = rho
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.unwrap_or(i))
            .collect();
        IQuiver::new(n, arrows, rho)
    }
}

fn parse_pair(rest: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != 2 {
        return Err("expected two vertex numbers".into());
    }
    let a = parts[0].parse().map_err(|_| "invalid vertex number".to_string())?;
    let b = parts[1].parse().map_err(|_| "invalid vertex number".to_string())?;
    Ok((a, b))
}

fn classify_tree(verts: &[usize], adj: &[Vec<usize>]) -> Result<DynkinType, QuiverError> {
    let deg = |v: usize| adj[v].len();
    if verts.iter().any(|&v| deg(v) > 3) {
        return Err(QuiverError::NotDynkin("vertex of degree > 3".into()));
    }
    let branch: Vec<usize> = verts.iter().copied().filter(|&v| deg(v) == 3).collect();
    match branch.len() {
        0 => Ok(DynkinType::A(verts.len())),
        1 => {
            let b = branch[0];
            let mut legs: Vec<usize> = adj[b]
                .iter()
                .map(|&start| {
                    let mut len = 1;
                    let (mut prev, mut cur) = (b, start);
                    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            legs.sort_unstable();
            match legs[..] {
                [1, 1, k] => Ok(DynkinType::D(k + 3)),
                [1, 2, 2] => Ok(DynkinType::E(6)),
                [1, 2, 3] => Ok(DynkinType::E(7)),
                [1, 2, 4] => Ok(DynkinType::E(8)),
                _ => Err(QuiverError::NotDynkin("branching beyond ADE".into())),
            }
        }
        _ => Err(QuiverError::NotDynkin("more than one branch vertex".into())),
    }
}

impl fmt::Display for IQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices = {}", self.n)?;
        for &(s, t) in &self.arrows {
            writeln!(f, "arrow {} {}", s + 1, t + 1)?;
        }
        for i in 0..self.n {
            if self.rho[i] >= i {
                writeln!(f, "involution {} {}", i + 1, self.rho[i] + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IQuiver({})", self.canonical_string())
    }
}
