//! Darboux and Frenet frames with curvatures and their derivatives.
//!
//! All frame data comes from jets of the curve and normal expressions, so
//! curvature derivatives are analytic rather than finite differences.  The
//! tangent is normalized by the speed jet, which reduces to the identity on
//! unit-speed input and keeps every curvature an arclength invariant when a
//! control fixture is sampled in a non-arclength parameter.

use crate::error::{KernelError, Result};
use crate::expr::{eval, Jet5, Real};
use crate::geometry::{Grid, NormalSpec, OrientedSurfaceCurve, SpaceCurve, Vec3};
use crate::tol;

pub(crate) type J = Jet5;
pub(crate) type JV = [J; 3];

pub(crate) fn jdot(a: &JV, b: &JV) -> J {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn jcross(a: &JV, b: &JV) -> JV {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn jshift(a: &JV) -> JV {
    [a[0].derivative(), a[1].derivative(), a[2].derivative()]
}

pub(crate) fn jtrunc(v: &JV, order: usize) -> JV {
    [
        v[0].truncated(order),
        v[1].truncated(order),
        v[2].truncated(order),
    ]
}

pub(crate) fn jvalue(v: &JV, k: usize) -> Vec3 {
    Vec3::new(v[0].dk(k), v[1].dk(k), v[2].dk(k))
}

/// Frame and curvature jets at one parameter value.  Derivative slots are
/// valid up to: alpha 5, sigma/T/V/U 4, curvatures 2 (higher slots zeroed);
/// everything is a jet in the sampling parameter, with arclength derivatives
/// obtained by dividing by sigma.
#[derive(Debug, Clone)]
pub(crate) struct FrameJets {
    pub s: f64,
    pub sigma: J,
    pub alpha: JV,
    pub t: JV,
    pub v: JV,
    pub u: JV,
    pub kg: J,
    pub kn: J,
    pub tg: J,
}

impl FrameJets {
    pub fn darboux_sample(&self) -> DarbouxSample {
        let speed = self.sigma.v0();
        DarbouxSample {
            s: self.s,
            t: jvalue(&self.t, 0),
            v: jvalue(&self.v, 0),
            u: jvalue(&self.u, 0),
            k_g: self.kg.v0(),
            k_n: self.kn.v0(),
            tau_g: self.tg.v0(),
            dk_g: self.kg.v1() / speed,
            dk_n: self.kn.v1() / speed,
            dtau_g: self.tg.v1() / speed,
        }
    }
}

/// Darboux frame triple with the curvature triple and its arclength
/// derivatives at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxSample {
    pub s: f64,
    pub t: Vec3,
    pub v: Vec3,
    pub u: Vec3,
    pub k_g: f64,
    pub k_n: f64,
    pub tau_g: f64,
    pub dk_g: f64,
    pub dk_n: f64,
    pub dtau_g: f64,
}

/// Frenet data of a (not necessarily unit-speed) space curve at one
/// parameter value.  `phi` is populated only for surface curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetSample {
    pub s: f64,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub phi: Option<f64>,
}

fn normal_jets(curve: &OrientedSurfaceCurve, s: f64) -> Result<JV> {
    match &curve.normal {
        NormalSpec::Analytic(n) => {
            let raw = n.jets::<6>(s)?;
            // Normalize; exact unit input passes through unchanged.
            let len = Real::sqrt(jdot(&raw, &raw));
            Ok([raw[0] / len, raw[1] / len, raw[2] / len])
        }
        NormalSpec::SurfaceDerived { surface, u, v } => {
            let uj: J = eval(u, &[J::variable(s)])?;
            let vj: J = eval(v, &[J::variable(s)])?;
            let pu = surface.partial_along::<6>(uj, vj, true)?;
            let pv = surface.partial_along::<6>(uj, vj, false)?;
            let w = jcross(&pu, &pv);
            let len = jdot(&w, &w);
            if len.v0().sqrt() < 1e-12 {
                return Err(KernelError::DegenerateParametrization {
                    u: uj.v0(),
                    v: vj.v0(),
                });
            }
            let len = Real::sqrt(len);
            Ok([w[0] / len, w[1] / len, w[2] / len])
        }
    }
}

pub(crate) fn frame_jets(curve: &OrientedSurfaceCurve, s: f64) -> Result<FrameJets> {
    let alpha = curve.alpha.jets::<6>(s)?;
    let ap = jshift(&alpha);
    let sigma2 = jdot(&ap, &ap);
    if sigma2.v0().sqrt() <= 1e-12 {
        return Err(KernelError::ZeroSpeed(s));
    }
    let sigma = Real::sqrt(sigma2).truncated(4);
    let t = jtrunc(&[ap[0] / sigma, ap[1] / sigma, ap[2] / sigma], 4);
    let u = jtrunc(&normal_jets(curve, s)?, 4);
    let v = jtrunc(&jcross(&u, &t), 4);
    let tp = jshift(&t);
    let vp = jshift(&v);
    let kg = (jdot(&tp, &v) / sigma).truncated(2);
    let kn = (jdot(&tp, &u) / sigma).truncated(2);
    let tg = (jdot(&vp, &u) / sigma).truncated(2);
    Ok(FrameJets {
        s,
        sigma,
        alpha,
        t,
        v,
        u,
        kg,
        kn,
        tg,
    })
}

pub(crate) fn frame_jets_grid(curve: &OrientedSurfaceCurve, grid: &Grid) -> Result<Vec<FrameJets>> {
    grid.points().map(|s| frame_jets(curve, s)).collect()
}

/// Darboux frame, curvatures and curvature derivatives at one point.
pub fn darboux_at(curve: &OrientedSurfaceCurve, s: f64) -> Result<DarbouxSample> {
    Ok(frame_jets(curve, s)?.darboux_sample())
}

/// Darboux samples over a grid; the curve is validated first and a failed
/// validation is an error.
pub fn darboux_samples(curve: &OrientedSurfaceCurve, grid: &Grid) -> Result<Vec<DarbouxSample>> {
    let report = crate::geometry::validate_surface_curve(curve, grid)?;
    if !report.pass {
        return Err(KernelError::ValidationFailed(report.summary()));
    }
    darboux_samples_unchecked(curve, grid)
}

/// Darboux samples without the validation gate.  Used for control fixtures
/// sampled in a non-arclength parameter; the reported curvatures are still
/// the arclength invariants.
pub(crate) fn darboux_samples_unchecked(
    curve: &OrientedSurfaceCurve,
    grid: &Grid,
) -> Result<Vec<DarbouxSample>> {
    grid.points().map(|s| darboux_at(curve, s)).collect()
}

/// Frenet data from the first three derivative vectors at one point.
pub fn frenet_from_derivs(s: f64, d1: Vec3, d2: Vec3, d3: Vec3) -> Result<FrenetSample> {
    let speed = d1.norm();
    if speed <= 1e-12 {
        return Err(KernelError::ZeroSpeed(s));
    }
    let c = d1.cross(d2);
    let cn = c.norm();
    let kappa = cn / (speed * speed * speed);
    if kappa < tol::FRAME_UNDEFINED {
        return Err(KernelError::UndefinedFrame { s, kappa });
    }
    let t = d1 / speed;
    let b = c / cn;
    let n = b.cross(t);
    let tau = c.dot(d3) / (cn * cn);
    Ok(FrenetSample {
        s,
        t,
        n,
        b,
        kappa,
        tau,
        phi: None,
    })
}

/// Frenet frame of an expression-backed space curve at `s`.
pub fn frenet_at(curve: &SpaceCurve, s: f64) -> Result<FrenetSample> {
    let j = curve.jets::<4>(s)?;
    frenet_from_derivs(
        s,
        Vec3::new(j[0].v1(), j[1].v1(), j[2].v1()),
        Vec3::new(j[0].v2(), j[1].v2(), j[2].v2()),
        Vec3::new(j[0].v3(), j[1].v3(), j[2].v3()),
    )
}

/// Angle between the Darboux and Frenet normal planes, measured so that
/// k_g = kappa cos(phi) and tau_g = tau + d(phi)/ds.
pub fn phi_angle(d: &DarbouxSample, f: &FrenetSample) -> f64 {
    let mut y = -d.u.dot(f.n);
    if y.abs() < 1e-14 {
        y = 0.0;
    }
    f64::atan2(y, d.v.dot(f.n))
}

/// Choose the continuous branch: each angle is shifted by the multiple of
/// 2*pi nearest to its predecessor.
pub fn unwrap_angles(phis: &mut [f64]) {
    const TAU: f64 = 2.0 * std::f64::consts::PI;
    for k in 1..phis.len() {
        let jump = ((phis[k - 1] - phis[k]) / TAU).round();
        phis[k] += TAU * jump;
    }
}

/// Frenet samples of a surface curve over a grid with `phi` populated on the
/// unwrapped branch.
pub fn surface_frenet_samples(
    curve: &OrientedSurfaceCurve,
    grid: &Grid,
) -> Result<Vec<FrenetSample>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut phis = Vec::with_capacity(grid.len());
    for s in grid.points() {
        let d = darboux_at(curve, s)?;
        let f = frenet_at(&curve.alpha, s)?;
        phis.push(phi_angle(&d, &f));
        out.push(f);
    }
    unwrap_angles(&mut phis);
    for (f, phi) in out.iter_mut().zip(phis) {
        f.phi = Some(phi);
    }
    Ok(out)
}
