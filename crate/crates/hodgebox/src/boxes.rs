//! Box elements: lattice points in the half-open parallelepipeds spanned by
//! the marked generators of each cone.
//!
//! Enumeration goes through Smith normal form coset representatives of the
//! subgroup generated by the markings inside its saturation - this yields
//! exactly `multiplicity(sigma)` points per cone with no bounding-box scan.
//! Results are cached fan-wide; all queries after that are lookups.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::exact::{smith_normal_form, solve_exact};
use crate::fan::{ConeId, StackyFan};
use crate::{Error, Result};

/// A lattice point `u` with `u = sum lambda_rho v_rho`, `0 <= lambda < 1`,
/// tagged with its minimal cone (the rays where `lambda > 0`).
#[derive(Debug, Clone)]
pub struct BoxElement {
    pub point: Vec<BigInt>,
    /// minimal cone `sigma(u)`
    pub cone: ConeId,
    /// (ray id, coordinate) for the rays of the minimal cone; all in (0,1)
    pub lambda: Vec<(usize, BigRational)>,
    pub degree: BigRational,
}

impl BoxElement {
    pub fn is_origin(&self) -> bool {
        self.lambda.is_empty()
    }

    /// `u^{-1} = sum_{rho in sigma(1)} v_rho - u`, the inverse box element.
    pub fn inverse(&self, fan: &StackyFan) -> BoxElement {
        let mut point = vec![BigInt::zero(); self.point.len()];
        for &(ray, _) in &self.lambda {
            for (p, v) in point.iter_mut().zip(fan.ray(ray)) {
                *p += v;
            }
        }
        for (p, u) in point.iter_mut().zip(&self.point) {
            *p -= u;
        }
        let lambda: Vec<(usize, BigRational)> = self
            .lambda
            .iter()
            .map(|(ray, l)| (*ray, BigRational::one() - l))
            .collect();
        let degree = lambda.iter().map(|(_, l)| l.clone()).sum();
        BoxElement {
            point,
            cone: self.cone,
            lambda,
            degree,
        }
    }

    /// Integer part of the degree, as i64 (degrees are tiny).
    pub fn degree_floor(&self) -> i64 {
        let f = self.degree.floor();
        let n = f.numer();
        i64::try_from(n).expect("degree fits in i64")
    }
}

/// `w = {w} + floor(w)` with `{w}` in the box and `floor(w)` a nonnegative
/// integer combination of the markings of the cone containing `w`.
#[derive(Debug, Clone)]
pub struct FracFloorDecomposition {
    pub input: Vec<BigInt>,
    pub frac: BoxElement,
    pub floor: Vec<BigInt>,
    /// (ray id, nonnegative integer coefficient) for the floor part
    pub floor_coords: Vec<(usize, BigInt)>,
}

/// All box elements of the fan, indexed for point and per-cone lookups.
#[derive(Debug, Clone)]
pub struct BoxCache {
    elements: Vec<BoxElement>,
    by_point: HashMap<Vec<BigInt>, usize>,
    by_cone: HashMap<usize, Vec<usize>>,
    inverse_of: Vec<usize>,
}

impl BoxCache {
    pub fn build(fan: &StackyFan) -> Result<Self> {
        let mut elements: Vec<BoxElement> = Vec::new();
        let mut by_point: HashMap<Vec<BigInt>, usize> = HashMap::new();
        let mut by_cone: HashMap<usize, Vec<usize>> = HashMap::new();
        for sigma in fan.cone_ids() {
            for el in interior_box_of_cone(fan, sigma)? {
                let idx = elements.len();
                if by_point.insert(el.point.clone(), idx).is_some() {
                    return Err(Error::Internal(format!(
                        "box element {:?} produced twice",
                        el.point
                    )));
                }
                by_cone.entry(sigma.index()).or_default().push(idx);
                elements.push(el);
            }
        }
        let inverse_of = elements
            .iter()
            .map(|el| {
                let inv = el.inverse(fan);
                by_point
                    .get(&inv.point)
                    .copied()
                    .ok_or_else(|| Error::Internal("inverse not in box".into()))
            })
            .collect::<Result<Vec<usize>>>()?;
        Ok(BoxCache {
            elements,
            by_point,
            by_cone,
            inverse_of,
        })
    }

    pub fn elements(&self) -> &[BoxElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, point: &[BigInt]) -> Option<usize> {
        self.by_point.get(point).copied()
    }

    pub fn element(&self, idx: usize) -> &BoxElement {
        &self.elements[idx]
    }

    pub fn inverse_index(&self, idx: usize) -> usize {
        self.inverse_of[idx]
    }

    /// Interior box elements of a cone (minimal cone exactly `sigma`).
    pub fn interior_of(&self, sigma: ConeId) -> Vec<&BoxElement> {
        self.by_cone
            .get(&sigma.index())
            .map(|v| v.iter().map(|&i| &self.elements[i]).collect())
            .unwrap_or_default()
    }
}

/// `Box(sigma)` including the contributions of the faces of `sigma`.
pub fn box_of_cone(fan: &StackyFan, sigma: ConeId) -> Result<Vec<BoxElement>> {
    let rays = fan.cone_rays(sigma).to_vec();
    let s = rays.len();
    let n = fan.rank();
    if s == 0 {
        return Ok(vec![BoxElement {
            point: vec![BigInt::zero(); n],
            cone: sigma,
            lambda: Vec::new(),
            degree: BigRational::zero(),
        }]);
    }
    let gen = fan.generator_matrix(sigma);
    let snf = smith_normal_form(&gen);
    let diag = snf.diagonal();
    if diag.iter().any(|d| d.is_zero()) {
        return Err(Error::Internal(
            "cone generators are linearly dependent".into(),
        ));
    }
    // coset representatives (r_1..r_s, 0..0) in U-coordinates, 0 <= r_i < d_i
    let mut reps: Vec<Vec<BigInt>> = vec![Vec::new()];
    for d in &diag {
        let bound: i64 = i64::try_from(d).expect("invariant factor fits in i64");
        let mut next = Vec::new();
        for rep in &reps {
            for r in 0..bound {
                let mut v = rep.clone();
                v.push(BigInt::from(r));
                next.push(v);
            }
        }
        reps = next;
    }
    let gen_rat = gen.to_rational();
    let mut out = Vec::with_capacity(reps.len());
    for rep in reps {
        // back to ambient coordinates: x = U * (rep, 0&)
        let mut x = vec![BigInt::zero(); n];
        for (i, xi) in x.iter_mut().enumerate() {
            for (j, r) in rep.iter().enumerate() {
                *xi += snf.u.at(i, j) * r;
            }
        }
        let xq: Vec<BigRational> = x.iter().map(|v| BigRational::from_integer(v.clone())).collect();
        let lam = solve_exact(&gen_rat, &xq)
            .ok_or_else(|| Error::Internal("coset rep outside cone span".into()))?;
        // reduce into the half-open parallelepiped: point = sum {lam_j} v_j
        let frac: Vec<BigRational> = lam.iter().map(|l| l - l.floor()).collect();
        let mut exact_point = vec![BigRational::zero(); n];
        for (j, f) in frac.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (p, v) in exact_point.iter_mut().zip(gen.column(j)) {
                *p += f * BigRational::from_integer(v);
            }
        }
        let mut point = vec![BigInt::zero(); n];
        for (p, q) in point.iter_mut().zip(&exact_point) {
            if !q.denom().is_one() {
                return Err(Error::Internal("box element is not a lattice point".into()));
            }
            *p = q.numer().clone();
        }
        let lambda: Vec<(usize, BigRational)> = rays
            .iter()
            .zip(&frac)
            .filter(|(_, f)| !f.is_zero())
            .map(|(&r, f)| (r, f.clone()))
            .collect();
        let support: Vec<usize> = lambda.iter().map(|(r, _)| *r).collect();
        let cone = fan.cone_id(&support)?;
        let degree: BigRational = frac.iter().cloned().sum();
        out.push(BoxElement {
            point,
            cone,
            lambda,
            degree,
        });
    }
    let mult = fan.multiplicity(sigma);
    if BigInt::from(out.len()) != mult {
        return Err(Error::Internal(format!(
            "box count {} != multiplicity {}",
            out.len(),
            mult
        )));
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(out)
}

/// Box elements whose minimal cone is exactly `sigma`.
pub fn interior_box_of_cone(fan: &StackyFan, sigma: ConeId) -> Result<Vec<BoxElement>> {
    Ok(box_of_cone(fan, sigma)?
        .into_iter()
        .filter(|el| el.cone == sigma)
        .collect())
}

/// `Box(Sigma)` as the disjoint union of interior boxes over all cones.
pub fn box_of_fan(fan: &StackyFan) -> Result<BoxCache> {
    BoxCache::build(fan)
}

/// Unique decomposition `w = {w} + floor(w)` of an arbitrary lattice point.
pub fn frac_floor(fan: &StackyFan, w: &[BigInt]) -> Result<FracFloorDecomposition> {
    let wq: Vec<BigRational> = w.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    let loc = fan.locate(&wq);
    let support = loc.support(fan);
    let mut frac_lambda: Vec<(usize, BigRational)> = Vec::new();
    let mut floor_coords: Vec<(usize, BigInt)> = Vec::new();
    for (ray, l) in support {
        let fl = l.floor();
        let fr = &l - &fl;
        let fl_int = fl.to_integer();
        if !fr.is_zero() {
            frac_lambda.push((ray, fr));
        }
        if !fl_int.is_zero() {
            floor_coords.push((ray, fl_int));
        }
    }
    let n = fan.rank();
    let mut frac_point = vec![BigRational::zero(); n];
    for (ray, l) in &frac_lambda {
        for (p, v) in frac_point.iter_mut().zip(fan.ray(*ray)) {
            *p += l * BigRational::from_integer(v.clone());
        }
    }
    let mut frac_int = vec![BigInt::zero(); n];
    for (p, q) in frac_int.iter_mut().zip(&frac_point) {
        if !q.denom().is_one() {
            return Err(Error::Internal("fractional part is not a lattice point".into()));
        }
        *p = q.numer().clone();
    }
    let floor: Vec<BigInt> = w.iter().zip(&frac_int).map(|(a, b)| a - b).collect();
    let support_rays: Vec<usize> = frac_lambda.iter().map(|(r, _)| *r).collect();
    let cone = fan.cone_id(&support_rays)?;
    let degree: BigRational = frac_lambda.iter().map(|(_, l)| l.clone()).sum();
    Ok(FracFloorDecomposition {
        input: w.to_vec(),
        frac: BoxElement {
            point: frac_int,
            cone,
            lambda: frac_lambda,
            degree,
        },
        floor,
        floor_coords,
    })
}
