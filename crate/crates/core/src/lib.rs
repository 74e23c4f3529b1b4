//! Exact-arithmetic toolkit for factorizing birational maps between log
//! surface pairs into elementary links.
//!
//! The central objects are weighted trees ([`dualgraph::DualGraph`]) that
//! record the boundary curves of a surface together with their
//! self-intersections.  Blow-up scripts replayed on such a tree produce a
//! marked resolution ([`factor::MarkedResolution`]) whose two `(-1)`-curves
//! single out the source and target boundaries of a birational map; walking
//! the path between them decomposes the map into elementary links
//! ([`factor::factorize`]).
//!
//! All numeric work (log discrepancies, pullback coefficients, degrees) is
//! done over arbitrary-precision rationals; equality everywhere means exact
//! equality.

pub mod rational;
pub mod linalg;
pub mod dualgraph;
pub mod hj;
pub mod discrepancy;
pub mod pair;
pub mod factor;
pub mod problem;
pub mod fixtures;
pub mod dot;
