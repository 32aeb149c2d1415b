//! Assembly of the two Hodge diamonds and the singularity spectrum from box
//! elements and quotient-fan h-vectors.
//!
//! Placement rule, per box element `u` with minimal cone `sigma`,
//! `c = codim sigma` and `k = 0..c`:
//!
//! ```text
//!   p = c - k + floor(deg u^{-1}),   q = c - k + floor(deg u)
//! ```
//!
//! deposited with multiplicity `h_k(Sigma(sigma))` into the weight-`n`
//! diamond when `deg u` is an integer and into the weight-`(n-1)` diamond
//! otherwise. Every deposit must satisfy `p + q = nu + c - 2k`; the literal
//! per-cone outer-product tables are materialized alongside and their totals
//! are reconciled against the deposits.
//!
//! Counting convention: `n(sigma, alpha)` counts box elements whose minimal
//! cone is exactly `sigma`. The alternative reading (all of `Box(sigma)`,
//! faces included) double-counts across cones and breaks the volume total;
//! it stays available as a diagnostic table.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

use crate::boxes::{box_of_cone, BoxCache};
use crate::exact::format_rational;
use crate::fan::StackyFan;
use crate::{Error, Result};

/// Sparse (p, q) -> multiplicity table with its mixed-Hodge weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeDiamond {
    pub weight: i64,
    pub entries: BTreeMap<(i64, i64), u64>,
}

impl HodgeDiamond {
    pub fn new(weight: i64) -> Self {
        HodgeDiamond {
            weight,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, p: i64, q: i64, mult: u64) {
        if mult > 0 {
            *self.entries.entry((p, q)).or_insert(0) += mult;
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|(&(p, q), &m)| self.entries.get(&(q, p)) == Some(&m))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|&(p, q)| p == q)
    }

    /// Multiplicities on the diagonal, indexed by p = 0..=weight_range.
    pub fn diagonal(&self) -> Vec<u64> {
        let max = self
            .entries
            .keys()
            .map(|&(p, q)| p.max(q))
            .max()
            .unwrap_or(-1);
        (0..=max)
            .map(|i| self.entries.get(&(i, i)).copied().unwrap_or(0))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(&(p, q), &m)| serde_json::json!([p, q, m]))
            .collect();
        serde_json::json!({ "weight": self.weight, "entries": entries })
    }

    /// ASCII diamond: one row per anti-diagonal `p + q`, top row highest,
    /// zero-only rows skipped, entries left-to-right by decreasing `p`.
    pub fn render_ascii(&self) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        let nu = self.weight.max(self.entries.keys().map(|&(p, q)| p.max(q)).max().unwrap_or(0));
        let width = self
            .entries
            .values()
            .map(|m| m.to_string().len())
            .max()
            .unwrap_or(1);
        let mut lines = Vec::new();
        for w in (0..=2 * nu).rev() {
            let lo = (w - nu).max(0);
            let hi = w.min(nu);
            let mut cells = Vec::new();
            let mut any = false;
            for p in (lo..=hi).rev() {
                let m = self.entries.get(&(p, w - p)).copied().unwrap_or(0);
                if m > 0 {
                    any = true;
                }
                cells.push(format!("{m:>width$}"));
            }
            if !any {
                continue;
            }
            let count = (hi - lo + 1) as usize;
            let pad = ((nu as usize + 1) - count) * (width + 1) / 2;
            lines.push(format!("{}{}", " ".repeat(pad), cells.join(" ")));
        }
        lines.join("\n")
    }
}

/// Multiset of spectral numbers (Newton degrees of a graded basis).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Spectrum {
    pub entries: BTreeMap<BigRational, u64>,
}

impl Spectrum {
    pub fn add(&mut self, beta: BigRational, mult: u64) {
        if mult > 0 {
            *self.entries.entry(beta).or_insert(0) += mult;
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn multiplicity(&self, beta: &BigRational) -> u64 {
        self.entries.get(beta).copied().unwrap_or(0)
    }

    /// Symmetry about `n/2`: multiplicity at `beta` equals at `n - beta`.
    pub fn is_symmetric(&self, n: usize) -> bool {
        let n = BigRational::from_integer(BigInt::from(n));
        self.entries
            .iter()
            .all(|(beta, &m)| self.multiplicity(&(&n - beta)) == m)
    }

    pub fn has_fractional(&self) -> bool {
        self.entries.keys().any(|b| !b.denom().is_one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(b, &m)| serde_json::json!([format_rational(b), m]))
            .collect();
        serde_json::Value::Array(entries)
    }

    pub fn render_ascii(&self) -> String {
        if self.entries.is_empty() {
            return "(empty)".to_string();
        }
        self.entries
            .iter()
            .map(|(b, m)| format!("{}: {}", format_rational(b), m))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Counts of box elements per (cone, degree).
#[derive(Debug, Clone)]
pub struct NCountTable {
    /// keyed by (cone index, degree)
    pub counts: BTreeMap<(usize, BigRational), u64>,
    /// true when faces' box elements were included (diagnostic reading)
    pub literal: bool,
}

/// Interior counting: each box element at its minimal cone.
pub fn n_counts(cache: &BoxCache) -> NCountTable {
    let mut counts = BTreeMap::new();
    for el in cache.elements() {
        *counts
            .entry((el.cone.index(), el.degree.clone()))
            .or_insert(0u64) += 1;
    }
    NCountTable {
        counts,
        literal: false,
    }
}

/// Literal counting: `Box(sigma)` includes the faces' elements, so one point
/// is tallied at every cone containing its minimal cone.
pub fn n_counts_literal(fan: &StackyFan) -> Result<NCountTable> {
    let mut counts = BTreeMap::new();
    for sigma in fan.cone_ids() {
        for el in box_of_cone(fan, sigma)? {
            *counts
                .entry((sigma.index(), el.degree.clone()))
                .or_insert(0u64) += 1;
        }
    }
    Ok(NCountTable {
        counts,
        literal: true,
    })
}

/// One outer-product table `A_alpha(sigma)`: h-vector column times the row
/// of degree counts for the fractional class `alpha`.
#[derive(Debug, Clone)]
pub struct LiteralTable {
    pub cone: usize,
    pub alpha: BigRational,
    pub h_column: Vec<u64>,
    pub count_row: Vec<(BigRational, u64)>,
    /// the paper keys its diamond pictures by matrix shape; recorded for the
    /// diagnostic dump only, the mixed-Hodge weight is `nu`
    pub shape_weight: usize,
}

/// Everything the diamond stage produces for one polytope.
#[derive(Debug, Clone)]
pub struct DiamondSet {
    pub rank: usize,
    pub hd_zero: HodgeDiamond,
    pub hd_nonzero: HodgeDiamond,
    pub spectrum: Spectrum,
    pub milnor: BigInt,
    pub hodge_tate: bool,
    pub fractional_spectrum: bool,
    pub tables: Vec<LiteralTable>,
}

/// Builds `HD_0`, `HD_{!=0}` and the spectrum from the box cache.
pub fn assemble(fan: &StackyFan, cache: &BoxCache) -> Result<DiamondSet> {
    let n = fan.rank() as i64;
    let mut hd_zero = HodgeDiamond::new(n);
    let mut hd_nonzero = HodgeDiamond::new(n - 1);
    let mut spectrum = Spectrum::default();

    let mut h_vectors: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for el in cache.elements() {
        h_vectors
            .entry(el.cone.index())
            .or_insert(fan.f_and_h_vector(el.cone)?.1);
    }

    // per (cone, alpha) totals to reconcile against the literal tables
    let mut deposit_totals: BTreeMap<(usize, BigRational), u64> = BTreeMap::new();

    for (idx, el) in cache.elements().iter().enumerate() {
        let sigma = el.cone;
        let c = fan.cone_codim(sigma) as i64;
        let dim_sigma = fan.cone_dim(sigma) as i64;
        let h = &h_vectors[&sigma.index()];
        let inv = cache.element(cache.inverse_index(idx));
        let integral = el.degree.denom().is_one();
        let nu = if integral { n } else { n - 1 };
        let fu = el.degree_floor();
        let fi = inv.degree_floor();
        if fu + fi != dim_sigma + nu - n {
            return Err(Error::Internal(format!(
                "floor identity failed for box element {:?}",
                el.point
            )));
        }
        let alpha = &el.degree - BigRational::from_integer(BigInt::from(fu));
        for (k, &hk) in h.iter().enumerate() {
            let k = k as i64;
            let p = c - k + fi;
            let q = c - k + fu;
            if p + q != nu + c - 2 * k {
                return Err(Error::Internal(format!(
                    "deposit ({p},{q}) violates p+q = nu+c-2k for {:?}",
                    el.point
                )));
            }
            if integral {
                hd_zero.add(p, q, hk);
            } else {
                hd_nonzero.add(p, q, hk);
            }
            *deposit_totals
                .entry((sigma.index(), alpha.clone()))
                .or_insert(0) += hk;
            spectrum.add(
                &el.degree + BigRational::from_integer(BigInt::from(k)),
                hk,
            );
        }
    }

    // literal outer-product tables and their reconciliation
    let counts = n_counts(cache);
    let mut tables: Vec<LiteralTable> = Vec::new();
    let mut class_degrees: BTreeMap<(usize, BigRational), Vec<(BigRational, u64)>> =
        BTreeMap::new();
    for (&(cone, ref deg), &cnt) in &counts.counts {
        let alpha = deg - deg.floor();
        class_degrees
            .entry((cone, alpha))
            .or_default()
            .push((deg.clone(), cnt));
    }
    for ((cone, alpha), row) in class_degrees {
        let h = h_vectors[&cone].clone();
        let table_total: u64 =
            h.iter().sum::<u64>() * row.iter().map(|(_, c)| *c).sum::<u64>();
        let deposited = deposit_totals
            .get(&(cone, alpha.clone()))
            .copied()
            .unwrap_or(0);
        if table_total != deposited {
            return Err(Error::Internal(format!(
                "literal table total {table_total} != deposits {deposited} at cone {cone}"
            )));
        }
        tables.push(LiteralTable {
            cone,
            alpha,
            shape_weight: h.len() + row.len(),
            h_column: h,
            count_row: row,
        });
    }

    let milnor: BigInt = fan
        .maximal_cones()
        .iter()
        .map(|&m| fan.multiplicity(m))
        .sum();
    let total = BigInt::from(hd_zero.total() + hd_nonzero.total());
    if total != milnor {
        return Err(Error::Internal(format!(
            "diamond total {total} != normalized volume {milnor}"
        )));
    }
    let hodge_tate = hd_zero.is_diagonal() && hd_nonzero.is_diagonal();
    let fractional_spectrum = spectrum.has_fractional();
    Ok(DiamondSet {
        rank: fan.rank(),
        hd_zero,
        hd_nonzero,
        spectrum,
        milnor,
        hodge_tate,
        fractional_spectrum,
        tables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::box_of_fan;
    use crate::exact::{rat, rat_int};
    use crate::polytope::LatticePolytope;
    use num::Zero;

    fn diamonds_of(vs: &[&[i64]]) -> DiamondSet {
        let p = LatticePolytope::validate(
            vs.iter()
                .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
            None,
        )
        .unwrap();
        let fan = StackyFan::from_polytope(&p);
        let cache = box_of_fan(&fan).unwrap();
        assemble(&fan, &cache).unwrap()
    }

    #[test]
    fn segment_diamond() {
        let d = diamonds_of(&[&[1], &[-1]]);
        assert_eq!(d.milnor, BigInt::from(2));
        assert_eq!(d.hd_zero.weight, 1);
        assert_eq!(d.hd_zero.diagonal(), vec![1, 1]);
        assert!(d.hd_nonzero.entries.is_empty());
        assert!(d.hodge_tate);
        assert!(!d.fractional_spectrum);
        assert_eq!(d.spectrum.multiplicity(&rat_int(0)), 1);
        assert_eq!(d.spectrum.multiplicity(&rat_int(1)), 1);
    }

    #[test]
    fn square_diamond() {
        let d = diamonds_of(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        assert_eq!(d.milnor, BigInt::from(8));
        assert_eq!(d.hd_zero.diagonal(), vec![1, 6, 1]);
        assert!(d.hd_nonzero.entries.is_empty());
        assert!(d.hodge_tate);
        for (beta, mult) in [(0i64, 1u64), (1, 6), (2, 1)] {
            assert_eq!(d.spectrum.multiplicity(&rat_int(beta)), mult);
        }
        assert_eq!(d.spectrum.total(), 8);
    }

    #[test]
    fn triangle_diamond() {
        let d = diamonds_of(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(d.milnor, BigInt::from(3));
        assert_eq!(d.hd_zero.diagonal(), vec![1, 1, 1]);
        assert!(d.hd_nonzero.entries.is_empty());
    }

    #[test]
    fn stretched_triangle_diamond() {
        let d = diamonds_of(&[&[1, 0], &[0, 2], &[-1, -1]]);
        assert_eq!(d.milnor, BigInt::from(5));
        assert_eq!(d.hd_zero.weight, 2);
        assert_eq!(d.hd_zero.diagonal(), vec![1, 1, 1]);
        assert_eq!(d.hd_nonzero.weight, 1);
        assert_eq!(d.hd_nonzero.diagonal(), vec![1, 1]);
        assert!(d.hodge_tate, "both diamonds are diagonal");
        assert!(d.fractional_spectrum);
        for (beta, mult) in [
            (rat_int(0), 1u64),
            (rat(1, 2), 1),
            (rat_int(1), 1),
            (rat(3, 2), 1),
            (rat_int(2), 1),
        ] {
            assert_eq!(d.spectrum.multiplicity(&beta), mult, "beta = {beta}");
        }
    }

    #[test]
    fn octahedron_diamond() {
        let d = diamonds_of(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ]);
        assert_eq!(d.milnor, BigInt::from(8));
        assert_eq!(d.hd_zero.diagonal(), vec![1, 3, 3, 1]);
        for (beta, mult) in [(0i64, 1u64), (1, 3), (2, 3), (3, 1)] {
            assert_eq!(d.spectrum.multiplicity(&rat_int(beta)), mult);
        }
    }

    #[test]
    fn symmetry_invariants() {
        for vs in [
            vec![vec![1i64], vec![-1]],
            vec![vec![1, 0], vec![0, 2], vec![-1, -1]],
            vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]],
        ] {
            let refs: Vec<&[i64]> = vs.iter().map(|v| v.as_slice()).collect();
            let d = diamonds_of(&refs);
            assert!(d.hd_zero.is_symmetric());
            assert!(d.hd_nonzero.is_symmetric());
            assert!(d.spectrum.is_symmetric(d.rank));
        }
    }

    #[test]
    fn render_golden() {
        let d = diamonds_of(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        assert_eq!(d.hd_zero.render_ascii(), "  1\n0 6 0\n  1");
        assert_eq!(HodgeDiamond::new(3).render_ascii(), "0");

        let seg = diamonds_of(&[&[1], &[-1]]);
        assert_eq!(
            seg.spectrum.to_json().to_string(),
            "[[\"0\",1],[\"1\",1]]"
        );
        assert_eq!(
            seg.hd_zero.to_json().to_string(),
            "{\"entries\":[[0,0,1],[1,1,1]],\"weight\":1}"
        );
    }

    #[test]
    fn literal_tables_reconcile() {
        let d = diamonds_of(&[&[1, 0], &[0, 2], &[-1, -1]]);
        // only cones with interior box elements produce nonzero tables:
        // the zero cone (alpha = 0) and the ray marked (0,2) (alpha = 1/2)
        assert_eq!(d.tables.len(), 2);
        let frac: Vec<_> = d.tables.iter().filter(|t| !t.alpha.is_zero()).collect();
        assert_eq!(frac.len(), 1);
        assert_eq!(frac[0].alpha, rat(1, 2));
        assert_eq!(frac[0].h_column, vec![1, 1]);
    }
}
