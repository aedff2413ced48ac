//! Exact computer algebra for Hall algebras of Dynkin iquivers and the
//! quantum symmetric pairs they realize.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`] — the ring ℤ[v^{±1/2}] (stored in u = v^{1/2}), its fraction
//!   field, and q-combinatorics;
//! * [`quiver`] — Dynkin iquivers (Q, ϱ), Euler and symmetrized forms,
//!   doubling;
//! * [`ffrep`] — quiver representations over 𝔽_p: Hom spaces, submodule
//!   enumeration, filtration and automorphism counting;
//! * [`roots`] — positive roots, indecomposables via reflection functors,
//!   admissible orders;
//! * [`counting`] — Hall numbers over 𝔽_p and the Riedtmann–Peng relation;
//! * [`hallpoly`] — generic Hall polynomials by interpolation, automorphism
//!   polynomials in closed form, the cache;
//! * [`ihall`] — the twisted semi-derived rings H̃(Q, ϱ) and H̃(Q^dbl, swap);
//! * [`hopf`] — the Borel B̃(Q), its Hopf structure, the Drinfeld double and
//!   the isomorphisms Φ̃, Φ̃^dbl, plus Hopf structure transported to the
//!   double Hall algebra;
//! * [`qsp`] — the quantum groups Ũ, Ũ^ı via generators, the embeddings ψ̃,
//!   ψ̃^dbl, the functional χ, the embedding Ω̃ and the coideal coproduct Δ̃;
//! * [`dcb`] — bar involution and the dual canonical basis.

pub mod counting;
pub mod dcb;
pub mod ffrep;
pub mod hallpoly;
pub mod hopf;
pub mod ihall;
pub mod qsp;
pub mod quiver;
pub mod roots;
pub mod scalar;
