//! Construction of the nine associated-helix families.
//!
//! Each family fixes one coefficient of gamma = alpha + y1 T + y2 V + y3 U
//! to zero and solves the remaining first-order system in closed form, with
//! every running integral realized by cumulative Simpson quadrature anchored
//! at the grid start.  Coefficients are carried as jets (value, integrand,
//! integrand derivatives), so the derivatives of gamma needed later for
//! Frenet data are analytic, not differenced.
//!
//! An independent classical RK4 integration of the same systems serves as
//! the numerical oracle.

use crate::error::{KernelError, Result};
use crate::expr::Real;
use crate::frames::{frame_jets, frame_jets_grid, jvalue, DarbouxSample, FrameJets, J, JV};
use crate::geometry::{FamilyConstants, Grid, OrientedSurfaceCurve, Vec3};
use crate::tol;

/// The nine families, keyed by the base-curve class they are associated to
/// (helical, relatively normal-slant helix, isophote) and the vanishing
/// coefficient case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HelixFamily {
    Hcc1,
    Hcc2,
    Hcc3,
    Rns1,
    Rns2,
    Rns3,
    Icc1,
    Icc2,
    Icc3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyGroup {
    /// gamma' rides the tangent T.
    Hcc,
    /// gamma' rides the tangent normal V.
    Rns,
    /// gamma' rides the surface normal U.
    Icc,
}

pub const ALL_FAMILIES: [HelixFamily; 9] = [
    HelixFamily::Hcc1,
    HelixFamily::Hcc2,
    HelixFamily::Hcc3,
    HelixFamily::Rns1,
    HelixFamily::Rns2,
    HelixFamily::Rns3,
    HelixFamily::Icc1,
    HelixFamily::Icc2,
    HelixFamily::Icc3,
];

impl HelixFamily {
    pub fn tag(self) -> &'static str {
        match self {
            HelixFamily::Hcc1 => "hcc1",
            HelixFamily::Hcc2 => "hcc2",
            HelixFamily::Hcc3 => "hcc3",
            HelixFamily::Rns1 => "rns1",
            HelixFamily::Rns2 => "rns2",
            HelixFamily::Rns3 => "rns3",
            HelixFamily::Icc1 => "icc1",
            HelixFamily::Icc2 => "icc2",
            HelixFamily::Icc3 => "icc3",
        }
    }

    pub fn from_tag(tag: &str) -> Option<HelixFamily> {
        ALL_FAMILIES.iter().copied().find(|f| f.tag() == tag)
    }

    pub fn group(self) -> FamilyGroup {
        match self {
            HelixFamily::Hcc1 | HelixFamily::Hcc2 | HelixFamily::Hcc3 => FamilyGroup::Hcc,
            HelixFamily::Rns1 | HelixFamily::Rns2 | HelixFamily::Rns3 => FamilyGroup::Rns,
            HelixFamily::Icc1 | HelixFamily::Icc2 | HelixFamily::Icc3 => FamilyGroup::Icc,
        }
    }

    /// Union of constants the family may reference across its cases.
    pub fn required_constants(self) -> &'static [&'static str] {
        match self {
            HelixFamily::Hcc1 => &[],
            HelixFamily::Hcc2 => &["c1"],
            HelixFamily::Hcc3 => &["c2"],
            HelixFamily::Rns1 => &["c3"],
            HelixFamily::Rns2 => &["c4", "c5", "c6", "c7"],
            HelixFamily::Rns3 => &["c8_rns3"],
            HelixFamily::Icc1 => &["c8_icc1"],
            HelixFamily::Icc2 => &["c9"],
            HelixFamily::Icc3 => &["c10", "c11", "c12", "c13"],
        }
    }
}

impl FamilyGroup {
    /// Index of the frame field gamma' must ride (0 = T, 1 = V, 2 = U).
    pub fn designated_index(self) -> usize {
        match self {
            FamilyGroup::Hcc => 0,
            FamilyGroup::Rns => 1,
            FamilyGroup::Icc => 2,
        }
    }

    pub fn designated_component(self) -> &'static str {
        match self {
            FamilyGroup::Hcc => "R_1",
            FamilyGroup::Rns => "R_2",
            FamilyGroup::Icc => "R_3",
        }
    }
}

/// Which case of the family's analysis was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    General,
    ZeroKg,
    ZeroKn,
    ZeroTg,
}

impl CaseTag {
    pub fn label(self) -> &'static str {
        match self {
            CaseTag::General => "general",
            CaseTag::ZeroKg => "k_g identically zero",
            CaseTag::ZeroKn => "k_n identically zero",
            CaseTag::ZeroTg => "tau_g identically zero",
        }
    }
}

/// Coefficient functions on the grid.
#[derive(Debug, Clone)]
pub struct CoefficientTrack {
    pub grid: Grid,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub y3: Vec<f64>,
    pub case_tag: CaseTag,
    pub constants: FamilyConstants,
}

/// One constructed sample: coefficients, curve point, parameter derivatives
/// of gamma, and the base-frame data at the same parameter value.
#[derive(Debug, Clone)]
pub struct AssociatedSample {
    pub s: f64,
    /// |alpha'| at this sample (1 for unit-speed input).
    pub speed: f64,
    pub y: [f64; 3],
    pub gamma: Vec3,
    pub gamma_d1: Vec3,
    pub gamma_d2: Vec3,
    pub gamma_d3: Vec3,
    /// Arclength components of gamma' in the Darboux frame (R_1, R_2, R_3).
    pub r: [f64; 3],
    pub frame: DarbouxSample,
}

#[derive(Debug, Clone)]
pub struct AssociatedCurve {
    pub family: HelixFamily,
    pub case_tag: CaseTag,
    pub grid: Grid,
    pub track: CoefficientTrack,
    pub samples: Vec<AssociatedSample>,
}

/// Max residuals of the family's two equality constraints and the min
/// magnitude of its nonvanishing clause, with coefficient derivatives taken
/// by five-point finite differences (independent of the jet pipeline).
#[derive(Debug, Clone, Copy)]
pub struct OdeResidual {
    pub equality: [f64; 2],
    pub inequality_min: f64,
}

// ---------------------------------------------------------------------------
// quadrature

/// Cumulative composite Simpson on a uniform grid with an odd sample count;
/// fourth-order accurate, F(s0) = 0.
fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    let mut i = 1;
    while i + 1 < n {
        // half-panel updates over the panel [i-1, i+1]
        out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        out[i + 1] = out[i] + h / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
        i += 2;
    }
    out
}

/// Running integral of sampled values over the grid, anchored to 0 at the
/// first sample.
pub fn cumulative_integral(f: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    if f.len() != grid.len() {
        return Err(KernelError::InvalidGrid(format!(
            "sample count {} does not match grid length {}",
            f.len(),
            grid.len()
        )));
    }
    if let Some(bad) = f.iter().find(|v| !v.is_finite()) {
        return Err(KernelError::NonFiniteSample(format!(
            "integrand value {bad}"
        )));
    }
    Ok(cumulative_simpson(f, grid.spacing()))
}

// ---------------------------------------------------------------------------
// jet-array helpers

fn emul(a: &[J], b: &[J]) -> Vec<J> {
    a.iter().zip(b).map(|(x, y)| *x * *y).collect()
}

fn ediv(a: &[J], b: &[J]) -> Vec<J> {
    a.iter().zip(b).map(|(x, y)| *x / *y).collect()
}

fn eadd(a: &[J], b: &[J]) -> Vec<J> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

fn esub(a: &[J], b: &[J]) -> Vec<J> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

fn eneg(a: &[J]) -> Vec<J> {
    a.iter().map(|x| -*x).collect()
}

fn emap(a: &[J], f: impl Fn(J) -> J) -> Vec<J> {
    a.iter().map(|x| f(*x)).collect()
}

fn econst(c: f64, n: usize) -> Vec<J> {
    vec![J::constant(c); n]
}

fn eshift_const(a: &[J], c: f64) -> Vec<J> {
    a.iter().map(|x| *x + J::constant(c)).collect()
}

/// Jets of the running arclength integral of `g`: the value comes from
/// quadrature of g * sigma, and the derivative slots are the integrand's.
fn arc_integral(g: &[J], sigma: &[J], h: f64) -> Vec<J> {
    let weighted: Vec<J> = emul(g, sigma);
    let vals: Vec<f64> = weighted.iter().map(|j| j.v0()).collect();
    let acc = cumulative_simpson(&vals, h);
    weighted
        .iter()
        .zip(acc)
        .map(|(j, v)| j.antiderivative(v))
        .collect()
}

// ---------------------------------------------------------------------------
// case selection

enum ZeroClass {
    IdenticallyZero,
    Nonvanishing,
}

fn classify_zero(values: &[J], name: &'static str) -> Result<ZeroClass> {
    let mut max_abs = 0.0f64;
    let mut min_abs = f64::INFINITY;
    let mut crosses = false;
    let mut prev = 0.0f64;
    for v in values {
        let x = v.v0();
        max_abs = max_abs.max(x.abs());
        min_abs = min_abs.min(x.abs());
        // A sign change between samples is an interior zero by continuity.
        if prev * x < 0.0 {
            crosses = true;
        }
        prev = x;
    }
    if max_abs <= tol::ZERO_CURVATURE {
        Ok(ZeroClass::IdenticallyZero)
    } else if min_abs >= tol::ZERO_CURVATURE && !crosses {
        Ok(ZeroClass::Nonvanishing)
    } else {
        Err(KernelError::CaseAmbiguity {
            curvature: name,
            min_abs,
            max_abs,
        })
    }
}

fn require_nonvanishing(values: &[J], name: &'static str) -> Result<()> {
    let min_abs = values
        .iter()
        .map(|v| v.v0().abs())
        .fold(f64::INFINITY, f64::min);
    if min_abs < tol::DIVISOR_MIN {
        return Err(KernelError::DivisorTooSmall {
            curvature: name,
            min_abs,
        });
    }
    Ok(())
}

struct CurvatureArrays {
    sigma: Vec<J>,
    kg: Vec<J>,
    kn: Vec<J>,
    tg: Vec<J>,
}

impl CurvatureArrays {
    fn from_frames(frames: &[FrameJets]) -> Self {
        CurvatureArrays {
            sigma: frames.iter().map(|f| f.sigma).collect(),
            kg: frames.iter().map(|f| f.kg).collect(),
            kn: frames.iter().map(|f| f.kn).collect(),
            tg: frames.iter().map(|f| f.tg).collect(),
        }
    }

    /// Jets of the arclength function s(t), anchored at the grid start.
    fn arclength(&self, grid: &Grid) -> Vec<J> {
        let ones = econst(1.0, self.sigma.len());
        eshift_const(&arc_integral(&ones, &self.sigma, grid.spacing()), grid.s0())
    }

    /// Arclength derivative jets of a curvature (d/ds = (d/dt)/sigma).
    fn arc_derivative(&self, q: &[J]) -> Vec<J> {
        q.iter()
            .zip(&self.sigma)
            .map(|(j, s)| (j.derivative() / *s).truncated(1))
            .collect()
    }
}

fn select_case(family: HelixFamily, c: &CurvatureArrays) -> Result<CaseTag> {
    match family {
        HelixFamily::Hcc1 => Ok(CaseTag::General),
        HelixFamily::Hcc2 => {
            require_nonvanishing(&c.kg, "k_g")?;
            Ok(CaseTag::General)
        }
        HelixFamily::Hcc3 => {
            require_nonvanishing(&c.kn, "k_n")?;
            Ok(CaseTag::General)
        }
        HelixFamily::Rns1 => match classify_zero(&c.kg, "k_g")? {
            ZeroClass::IdenticallyZero => {
                require_nonvanishing(&c.kn, "k_n")?;
                require_nonvanishing(&c.tg, "tau_g")?;
                Ok(CaseTag::ZeroKg)
            }
            ZeroClass::Nonvanishing => Ok(CaseTag::General),
        },
        HelixFamily::Rns2 => match classify_zero(&c.kn, "k_n")? {
            ZeroClass::IdenticallyZero => Ok(CaseTag::ZeroKn),
            ZeroClass::Nonvanishing => Ok(CaseTag::General),
        },
        HelixFamily::Rns3 => match classify_zero(&c.tg, "tau_g")? {
            ZeroClass::IdenticallyZero => {
                require_nonvanishing(&c.kn, "k_n")?;
                require_nonvanishing(&c.kg, "k_g")?;
                Ok(CaseTag::ZeroTg)
            }
            ZeroClass::Nonvanishing => Ok(CaseTag::General),
        },
        HelixFamily::Icc1 => match classify_zero(&c.kn, "k_n")? {
            ZeroClass::IdenticallyZero => {
                require_nonvanishing(&c.kg, "k_g")?;
                require_nonvanishing(&c.tg, "tau_g")?;
                Ok(CaseTag::ZeroKn)
            }
            ZeroClass::Nonvanishing => Ok(CaseTag::General),
        },
        HelixFamily::Icc2 => match classify_zero(&c.tg, "tau_g")? {
            ZeroClass::IdenticallyZero => {
                require_nonvanishing(&c.kg, "k_g")?;
                require_nonvanishing(&c.kn, "k_n")?;
                Ok(CaseTag::ZeroTg)
            }
            ZeroClass::Nonvanishing => Ok(CaseTag::General),
        },
        HelixFamily::Icc3 => match classify_zero(&c.kg, "k_g")? {
            ZeroClass::IdenticallyZero => Ok(CaseTag::ZeroKg),
            ZeroClass::Nonvanishing => Ok(CaseTag::General),
        },
    }
}

/// Constants each (family, case) actually reads.
fn case_constants(family: HelixFamily, case: CaseTag) -> &'static [&'static str] {
    match (family, case) {
        (HelixFamily::Hcc1, _) => &[],
        (HelixFamily::Hcc2, _) => &["c1"],
        (HelixFamily::Hcc3, _) => &["c2"],
        (HelixFamily::Rns1, CaseTag::ZeroKg) => &[],
        (HelixFamily::Rns1, _) => &["c3"],
        (HelixFamily::Rns2, CaseTag::ZeroKn) => &["c4", "c5"],
        (HelixFamily::Rns2, _) => &["c6", "c7"],
        (HelixFamily::Rns3, CaseTag::ZeroTg) => &[],
        (HelixFamily::Rns3, _) => &["c8_rns3"],
        (HelixFamily::Icc1, CaseTag::ZeroKn) => &[],
        (HelixFamily::Icc1, _) => &["c8_icc1"],
        (HelixFamily::Icc2, CaseTag::ZeroTg) => &[],
        (HelixFamily::Icc2, _) => &["c9"],
        (HelixFamily::Icc3, CaseTag::ZeroKg) => &["c10", "c11"],
        (HelixFamily::Icc3, _) => &["c12", "c13"],
    }
}

// ---------------------------------------------------------------------------
// coefficient construction

struct Coefficients {
    y: [Vec<J>; 3],
    case_tag: CaseTag,
}

fn coefficient_jets(
    family: HelixFamily,
    c: &CurvatureArrays,
    constants: &FamilyConstants,
    grid: &Grid,
) -> Result<Coefficients> {
    let case = select_case(family, c)?;
    let mut needed = std::collections::BTreeMap::new();
    for name in case_constants(family, case) {
        needed.insert(*name, constants.get(name)?);
    }
    let k = |name: &str| needed[name];
    let h = grid.spacing();
    let n = grid.len();
    let zero = || econst(0.0, n);
    let one = econst(1.0, n);

    let y = match (family, case) {
        (HelixFamily::Hcc1, _) => {
            let i = arc_integral(&c.tg, &c.sigma, h);
            let y2 = emap(&i, Real::sin);
            let y3 = emap(&i, Real::cos);
            [zero(), y2, y3]
        }
        (HelixFamily::Hcc2, _) => {
            let j = arc_integral(&ediv(&emul(&c.kn, &c.tg), &c.kg), &c.sigma, h);
            let y3 = emap(&j, |x| Real::exp(-x) * k("c1"));
            let y1 = emul(&ediv(&c.tg, &c.kg), &y3);
            [y1, zero(), y3]
        }
        (HelixFamily::Hcc3, _) => {
            let j = arc_integral(&ediv(&emul(&c.kg, &c.tg), &c.kn), &c.sigma, h);
            let y2 = emap(&j, |x| Real::exp(x) * k("c2"));
            let y1 = eneg(&emul(&ediv(&c.tg, &c.kn), &y2));
            [y1, y2, zero()]
        }
        (HelixFamily::Rns1, CaseTag::ZeroKg) => {
            let y3 = ediv(&one, &c.kn);
            let knp = c.arc_derivative(&c.kn);
            let y2 = ediv(&knp, &emul(&c.tg, &emul(&c.kn, &c.kn)));
            [zero(), y2, y3]
        }
        (HelixFamily::Rns1, _) => {
            let j = arc_integral(&ediv(&emul(&c.kn, &c.tg), &c.kg), &c.sigma, h);
            let q = arc_integral(
                &emul(&emap(&j, |x| Real::exp(-x)), &ediv(&c.tg, &c.kg)),
                &c.sigma,
                h,
            );
            let y3 = emul(&emap(&j, Real::exp), &esub(&econst(k("c3"), n), &q));
            let y2 = ediv(&esub(&one, &emul(&c.kn, &y3)), &c.kg);
            [zero(), y2, y3]
        }
        (HelixFamily::Rns2, CaseTag::ZeroKn) => {
            let sarc = c.arclength(grid);
            let y1 = esub(&econst(k("c4"), n), &sarc);
            let y3 = econst(k("c5"), n);
            [y1, zero(), y3]
        }
        (HelixFamily::Rns2, _) => {
            let th = arc_integral(&c.kn, &c.sigma, h);
            let sth = emap(&th, Real::sin);
            let cth = emap(&th, Real::cos);
            let s_int = arc_integral(&sth, &c.sigma, h);
            let c_int = arc_integral(&cth, &c.sigma, h);
            // y3 = c6 cos + c7 sin - cos * S + sin * C
            let y3 = eadd(
                &esub(
                    &eadd(&emap(&cth, |x| x * k("c6")), &emap(&sth, |x| x * k("c7"))),
                    &emul(&cth, &s_int),
                ),
                &emul(&sth, &c_int),
            );
            // y1 = -sin (S - c6) - cos (C + c7)
            let y1 = eneg(&eadd(
                &emul(&sth, &eshift_const(&s_int, -k("c6"))),
                &emul(&cth, &eshift_const(&c_int, k("c7"))),
            ));
            [y1, zero(), y3]
        }
        (HelixFamily::Rns3, CaseTag::ZeroTg) => {
            let y2 = ediv(&one, &c.kg);
            [zero(), y2, zero()]
        }
        (HelixFamily::Rns3, _) => {
            let kk = arc_integral(&ediv(&emul(&c.kn, &c.kg), &c.tg), &c.sigma, h);
            let w = arc_integral(&emap(&kk, Real::exp), &c.sigma, h);
            let y1 = emul(
                &emap(&kk, |x| Real::exp(-x)),
                &esub(&econst(k("c8_rns3"), n), &w),
            );
            let y2 = eneg(&emul(&ediv(&c.kn, &c.tg), &y1));
            [y1, y2, zero()]
        }
        (HelixFamily::Icc1, CaseTag::ZeroKn) => {
            // Consistent solution of the reduced system (the printed form
            // carries a sign slip): y2 = 1/k_g, y3 = -k_g' / (k_g^2 tau_g).
            let y2 = ediv(&one, &c.kg);
            let kgp = c.arc_derivative(&c.kg);
            let y3 = eneg(&ediv(&kgp, &emul(&emul(&c.kg, &c.kg), &c.tg)));
            [zero(), y2, y3]
        }
        (HelixFamily::Icc1, _) => {
            let l = arc_integral(&ediv(&emul(&c.kg, &c.tg), &c.kn), &c.sigma, h);
            let w = arc_integral(
                &emul(&emap(&l, Real::exp), &ediv(&c.tg, &c.kn)),
                &c.sigma,
                h,
            );
            let y2 = emul(
                &emap(&l, |x| Real::exp(-x)),
                &eshift_const(&w, k("c8_icc1")),
            );
            let y3 = ediv(&esub(&one, &emul(&c.kg, &y2)), &c.kn);
            [zero(), y2, y3]
        }
        (HelixFamily::Icc2, CaseTag::ZeroTg) => {
            // Consistent solution (printed form carries a sign slip):
            // y3 = +1/k_n.
            let y3 = ediv(&one, &c.kn);
            [zero(), zero(), y3]
        }
        (HelixFamily::Icc2, _) => {
            let m = arc_integral(&ediv(&emul(&c.kg, &c.kn), &c.tg), &c.sigma, h);
            let w = arc_integral(&emap(&m, |x| Real::exp(-x)), &c.sigma, h);
            let y1 = emul(&emap(&m, Real::exp), &esub(&econst(k("c9"), n), &w));
            let y3 = emul(&ediv(&c.kg, &c.tg), &y1);
            [y1, zero(), y3]
        }
        (HelixFamily::Icc3, CaseTag::ZeroKg) => {
            let sarc = c.arclength(grid);
            let y1 = esub(&econst(k("c10"), n), &sarc);
            let y2 = econst(k("c11"), n);
            [y1, y2, zero()]
        }
        (HelixFamily::Icc3, _) => {
            let z = arc_integral(&c.kg, &c.sigma, h);
            let sz = emap(&z, Real::sin);
            let cz = emap(&z, Real::cos);
            let s_int = arc_integral(&sz, &c.sigma, h);
            let c_int = arc_integral(&cz, &c.sigma, h);
            let y2 = eadd(
                &esub(
                    &eadd(&emap(&cz, |x| x * k("c12")), &emap(&sz, |x| x * k("c13"))),
                    &emul(&cz, &s_int),
                ),
                &emul(&sz, &c_int),
            );
            let y1 = eneg(&eadd(
                &emul(&sz, &eshift_const(&s_int, -k("c12"))),
                &emul(&cz, &eshift_const(&c_int, k("c13"))),
            ));
            [y1, y2, zero()]
        }
    };

    // Derivative slots above order 3 carry no information downstream.
    let y = [
        y[0].iter().map(|j| j.truncated(3)).collect(),
        y[1].iter().map(|j| j.truncated(3)).collect(),
        y[2].iter().map(|j| j.truncated(3)).collect(),
    ];
    Ok(Coefficients { y, case_tag: case })
}

// ---------------------------------------------------------------------------
// construction

/// Build the associated curve of `family` over the grid, checking the
/// family's case hypotheses, divisors and regularity clause.
pub fn construct(
    family: HelixFamily,
    curve: &OrientedSurfaceCurve,
    constants: &FamilyConstants,
    grid: &Grid,
) -> Result<AssociatedCurve> {
    let frames = frame_jets_grid(curve, grid)?;
    construct_from_frames(family, &frames, constants, grid)
}

pub(crate) fn construct_from_frames(
    family: HelixFamily,
    frames: &[FrameJets],
    constants: &FamilyConstants,
    grid: &Grid,
) -> Result<AssociatedCurve> {
    let arrays = CurvatureArrays::from_frames(frames);
    let coeff = coefficient_jets(family, &arrays, constants, grid)?;

    let n = grid.len();
    let mut samples = Vec::with_capacity(n);
    let mut y1v = Vec::with_capacity(n);
    let mut y2v = Vec::with_capacity(n);
    let mut y3v = Vec::with_capacity(n);

    for k in 0..n {
        let fj = &frames[k];
        let y = [coeff.y[0][k], coeff.y[1][k], coeff.y[2][k]];
        let mut gamma: JV = fj.alpha;
        for (yi, field) in y.iter().zip([&fj.t, &fj.v, &fj.u]) {
            for c in 0..3 {
                gamma[c] = gamma[c] + *yi * field[c];
            }
        }
        let g0 = jvalue(&gamma, 0);
        let g1 = jvalue(&gamma, 1);
        let g2 = jvalue(&gamma, 2);
        let g3 = jvalue(&gamma, 3);
        let speed = fj.sigma.v0();
        let frame = fj.darboux_sample();
        let r = [
            g1.dot(frame.t) / speed,
            g1.dot(frame.v) / speed,
            g1.dot(frame.u) / speed,
        ];
        y1v.push(y[0].v0());
        y2v.push(y[1].v0());
        y3v.push(y[2].v0());
        samples.push(AssociatedSample {
            s: fj.s,
            speed,
            y: [y[0].v0(), y[1].v0(), y[2].v0()],
            gamma: g0,
            gamma_d1: g1,
            gamma_d2: g2,
            gamma_d3: g3,
            r,
            frame,
        });
    }

    // The nonvanishing clause of the family's system.  A sign flip between
    // adjacent samples means the component vanished inside the interval, so
    // it fails the clause even when no sample itself is tiny.
    let idx = family.group().designated_index();
    let mut min_abs = f64::INFINITY;
    let mut min_s = grid.s0();
    let mut prev = 0.0f64;
    let mut flipped = false;
    for sm in &samples {
        let v = sm.r[idx];
        if v.abs() < min_abs {
            min_abs = v.abs();
            min_s = sm.s;
        }
        if prev * v < 0.0 {
            flipped = true;
        }
        prev = v;
    }
    if min_abs < tol::REGULARITY_MIN || flipped {
        return Err(KernelError::RegularityViolation {
            family: family.tag(),
            component: family.group().designated_component(),
            min_abs,
            s: min_s,
        });
    }

    Ok(AssociatedCurve {
        family,
        case_tag: coeff.case_tag,
        grid: *grid,
        track: CoefficientTrack {
            grid: *grid,
            y1: y1v,
            y2: y2v,
            y3: y3v,
            case_tag: coeff.case_tag,
            constants: constants.clone(),
        },
        samples,
    })
}

// ---------------------------------------------------------------------------
// residuals

/// Five-point derivative of sampled values (central inside, one-sided at the
/// two points on each edge), fourth-order accurate.
fn five_point_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    for k in 2..n - 2 {
        out[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
    }
    out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5])
        / (12.0 * h);
    out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
        + 3.0 * f[n - 5])
        / (12.0 * h);
    out
}

/// Evaluate the residuals of the family's system against the stored track.
pub fn ode_residual(a: &AssociatedCurve) -> OdeResidual {
    let h = a.grid.spacing();
    let dy1 = five_point_derivative(&a.track.y1, h);
    let dy2 = five_point_derivative(&a.track.y2, h);
    let dy3 = five_point_derivative(&a.track.y3, h);

    let mut e = [0.0f64; 3];
    let mut ineq = f64::INFINITY;
    let idx = a.family.group().designated_index();
    for (k, sm) in a.samples.iter().enumerate() {
        let d = &sm.frame;
        // convert parameter derivatives to arclength derivatives
        let (p1, p2, p3) = (dy1[k] / sm.speed, dy2[k] / sm.speed, dy3[k] / sm.speed);
        let (y1, y2, y3) = (sm.y[0], sm.y[1], sm.y[2]);
        let res = [
            p1 - d.k_g * y2 - d.k_n * y3 + 1.0,
            p2 + d.k_g * y1 - d.tau_g * y3,
            p3 + d.k_n * y1 + d.tau_g * y2,
        ];
        for i in 0..3 {
            if i == idx {
                ineq = ineq.min(res[i].abs());
            } else {
                e[i] = e[i].max(res[i].abs());
            }
        }
    }
    let equality: Vec<f64> = (0..3).filter(|i| *i != idx).map(|i| e[i]).collect();
    OdeResidual {
        equality: [equality[0], equality[1]],
        inequality_min: ineq,
    }
}

// ---------------------------------------------------------------------------
// RK4 oracle

/// Curvature values on the eighth-step lattice used by the RK4 stages.
struct Lattice {
    sigma: Vec<f64>,
    kg: Vec<f64>,
    kn: Vec<f64>,
    tg: Vec<f64>,
}

fn build_lattice(curve: &OrientedSurfaceCurve, grid: &Grid) -> Result<Lattice> {
    let n = 8 * (grid.len() - 1) + 1;
    let step = grid.spacing() / 8.0;
    let mut sigma = Vec::with_capacity(n);
    let mut kg = Vec::with_capacity(n);
    let mut kn = Vec::with_capacity(n);
    let mut tg = Vec::with_capacity(n);
    for i in 0..n {
        let s = grid.s0() + i as f64 * step;
        let fj = frame_jets(curve, s)?;
        sigma.push(fj.sigma.v0());
        kg.push(fj.kg.v0());
        kn.push(fj.kn.v0());
        tg.push(fj.tg.v0());
    }
    Ok(Lattice { sigma, kg, kn, tg })
}

/// Independently integrate the family's reduced system with classical RK4
/// (step = grid spacing / 4) from the closed form's initial values, with
/// dense output at the grid samples.
pub fn rk4_oracle(
    family: HelixFamily,
    curve: &OrientedSurfaceCurve,
    constants: &FamilyConstants,
    grid: &Grid,
) -> Result<CoefficientTrack> {
    let frames = frame_jets_grid(curve, grid)?;
    let arrays = CurvatureArrays::from_frames(&frames);
    let case = select_case(family, &arrays)?;
    let mut needed = std::collections::BTreeMap::new();
    for name in case_constants(family, case) {
        needed.insert(*name, constants.get(name)?);
    }
    let k = |name: &str| needed[name];

    let lat = build_lattice(curve, grid)?;
    let n = grid.len();
    let q = grid.spacing() / 4.0; // RK4 step; stages live on the lattice

    // The reduced ODE right-hand side in the sampling parameter:
    // dy/dt = sigma(t) * f(s-form), evaluated at lattice index `li`.
    type Rhs<'a> = Box<dyn Fn(usize, [f64; 2]) -> [f64; 2] + 'a>;
    let rhs: Rhs = match (family, case) {
        (HelixFamily::Hcc1, _) => Box::new(|li, y| {
            let s = lat.sigma[li];
            [s * lat.tg[li] * y[1], -s * lat.tg[li] * y[0]]
        }),
        (HelixFamily::Hcc2, _) => Box::new(|li, y| {
            let s = lat.sigma[li];
            [-s * lat.kn[li] * lat.tg[li] / lat.kg[li] * y[0], 0.0]
        }),
        (HelixFamily::Hcc3, _) => Box::new(|li, y| {
            let s = lat.sigma[li];
            [s * lat.kg[li] * lat.tg[li] / lat.kn[li] * y[0], 0.0]
        }),
        (HelixFamily::Rns1, CaseTag::ZeroKg) => Box::new(|_, _| [0.0, 0.0]),
        (HelixFamily::Rns1, _) => Box::new(|li, y| {
            let s = lat.sigma[li];
            let a = lat.kn[li] * lat.tg[li] / lat.kg[li];
            let b = lat.tg[li] / lat.kg[li];
            [s * (a * y[0] - b), 0.0]
        }),
        (HelixFamily::Rns2, CaseTag::ZeroKn) => Box::new(|li, _| [-lat.sigma[li], 0.0]),
        (HelixFamily::Rns2, _) => Box::new(|li, y| {
            // state = [y1, y3]
            let s = lat.sigma[li];
            [s * (lat.kn[li] * y[1] - 1.0), -s * lat.kn[li] * y[0]]
        }),
        (HelixFamily::Rns3, CaseTag::ZeroTg) => Box::new(|_, _| [0.0, 0.0]),
        (HelixFamily::Rns3, _) => Box::new(|li, y| {
            let s = lat.sigma[li];
            [
                -s * (lat.kn[li] * lat.kg[li] / lat.tg[li] * y[0] + 1.0),
                0.0,
            ]
        }),
        (HelixFamily::Icc1, CaseTag::ZeroKn) => Box::new(|_, _| [0.0, 0.0]),
        (HelixFamily::Icc1, _) => Box::new(|li, y| {
            let s = lat.sigma[li];
            let a = lat.kg[li] * lat.tg[li] / lat.kn[li];
            let b = lat.tg[li] / lat.kn[li];
            [s * (-a * y[0] + b), 0.0]
        }),
        (HelixFamily::Icc2, CaseTag::ZeroTg) => Box::new(|_, _| [0.0, 0.0]),
        (HelixFamily::Icc2, _) => Box::new(|li, y| {
            let s = lat.sigma[li];
            [s * (lat.kg[li] * lat.kn[li] / lat.tg[li] * y[0] - 1.0), 0.0]
        }),
        (HelixFamily::Icc3, CaseTag::ZeroKg) => Box::new(|li, _| [-lat.sigma[li], 0.0]),
        (HelixFamily::Icc3, _) => Box::new(|li, y| {
            // state = [y1, y2]
            let s = lat.sigma[li];
            [s * (lat.kg[li] * y[1] - 1.0), -s * lat.kg[li] * y[0]]
        }),
    };

    // Initial state at the grid start, from the closed forms.
    let mut state: [f64; 2] = match (family, case) {
        (HelixFamily::Hcc1, _) => [0.0, 1.0],
        (HelixFamily::Hcc2, _) => [k("c1"), 0.0],
        (HelixFamily::Hcc3, _) => [k("c2"), 0.0],
        (HelixFamily::Rns1, CaseTag::ZeroKg) => [0.0, 0.0],
        (HelixFamily::Rns1, _) => [k("c3"), 0.0],
        (HelixFamily::Rns2, CaseTag::ZeroKn) => [k("c4") - grid.s0(), k("c5")],
        (HelixFamily::Rns2, _) => [-k("c7"), k("c6")],
        (HelixFamily::Rns3, CaseTag::ZeroTg) => [0.0, 0.0],
        (HelixFamily::Rns3, _) => [k("c8_rns3"), 0.0],
        (HelixFamily::Icc1, CaseTag::ZeroKn) => [0.0, 0.0],
        (HelixFamily::Icc1, _) => [k("c8_icc1"), 0.0],
        (HelixFamily::Icc2, CaseTag::ZeroTg) => [0.0, 0.0],
        (HelixFamily::Icc2, _) => [k("c9"), 0.0],
        (HelixFamily::Icc3, CaseTag::ZeroKg) => [k("c10") - grid.s0(), k("c11")],
        (HelixFamily::Icc3, _) => [-k("c13"), k("c12")],
    };

    let mut states = Vec::with_capacity(n);
    states.push(state);
    for node in 0..n - 1 {
        for sub in 0..4 {
            let li = 8 * node + 2 * sub; // lattice index of the substep start
            let k1 = rhs(li, state);
            let y2 = [state[0] + 0.5 * q * k1[0], state[1] + 0.5 * q * k1[1]];
            let k2 = rhs(li + 1, y2);
            let y3 = [state[0] + 0.5 * q * k2[0], state[1] + 0.5 * q * k2[1]];
            let k3 = rhs(li + 1, y3);
            let y4 = [state[0] + q * k3[0], state[1] + q * k3[1]];
            let k4 = rhs(li + 2, y4);
            state = [
                state[0] + q / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                state[1] + q / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ];
        }
        states.push(state);
    }

    // Expand the integrated state (plus algebraic companions) to (y1, y2, y3).
    let mut y1 = vec![0.0; n];
    let mut y2 = vec![0.0; n];
    let mut y3 = vec![0.0; n];
    for i in 0..n {
        let li = 8 * i;
        let (kg, kn, tg) = (lat.kg[li], lat.kn[li], lat.tg[li]);
        let st = states[i];
        match (family, case) {
            (HelixFamily::Hcc1, _) => {
                y2[i] = st[0];
                y3[i] = st[1];
            }
            (HelixFamily::Hcc2, _) => {
                y3[i] = st[0];
                y1[i] = tg / kg * st[0];
            }
            (HelixFamily::Hcc3, _) => {
                y2[i] = st[0];
                y1[i] = -tg / kn * st[0];
            }
            (HelixFamily::Rns1, CaseTag::ZeroKg) => {
                let fj = &frames[i];
                let knp = fj.kn.v1() / fj.sigma.v0();
                y3[i] = 1.0 / kn;
                y2[i] = knp / (tg * kn * kn);
            }
            (HelixFamily::Rns1, _) => {
                y3[i] = st[0];
                y2[i] = (1.0 - kn * st[0]) / kg;
            }
            (HelixFamily::Rns2, _) => {
                y1[i] = st[0];
                y3[i] = st[1];
            }
            (HelixFamily::Rns3, CaseTag::ZeroTg) => {
                y2[i] = 1.0 / kg;
            }
            (HelixFamily::Rns3, _) => {
                y1[i] = st[0];
                y2[i] = -kn / tg * st[0];
            }
            (HelixFamily::Icc1, CaseTag::ZeroKn) => {
                let fj = &frames[i];
                let kgp = fj.kg.v1() / fj.sigma.v0();
                y2[i] = 1.0 / kg;
                y3[i] = -kgp / (kg * kg * tg);
            }
            (HelixFamily::Icc1, _) => {
                y2[i] = st[0];
                y3[i] = (1.0 - kg * st[0]) / kn;
            }
            (HelixFamily::Icc2, CaseTag::ZeroTg) => {
                y3[i] = 1.0 / kn;
            }
            (HelixFamily::Icc2, _) => {
                y1[i] = st[0];
                y3[i] = kg / tg * st[0];
            }
            (HelixFamily::Icc3, _) => {
                y1[i] = st[0];
                y2[i] = st[1];
            }
        }
    }

    Ok(CoefficientTrack {
        grid: *grid,
        y1,
        y2,
        y3,
        case_tag: case,
        constants: constants.clone(),
    })
}

/// Max per-coefficient deviation between two tracks on the same grid.
pub fn track_deviation(a: &CoefficientTrack, b: &CoefficientTrack) -> [f64; 3] {
    let max_dev = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0f64, f64::max)
    };
    [
        max_dev(&a.y1, &b.y1),
        max_dev(&a.y2, &b.y2),
        max_dev(&a.y3, &b.y3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn cumulative_integral_exact_on_constant() {
        let g = Grid::new(0.0, 10.0, 101).unwrap();
        let f = vec![1.0; g.len()];
        let acc = cumulative_integral(&f, &g).unwrap();
        for (k, v) in acc.iter().enumerate() {
            assert!((v - g.at(k)).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn cumulative_integral_cosine() {
        let g = Grid::new(0.0, 2.0 * PI, 2001).unwrap();
        let f: Vec<f64> = g.points().map(|s| s.cos()).collect();
        let acc = cumulative_integral(&f, &g).unwrap();
        assert!(acc.last().unwrap().abs() < 1e-10);
        for (k, v) in acc.iter().enumerate().step_by(100) {
            assert!((v - g.at(k).sin()).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn cumulative_integral_of_constant_torsion() {
        let fx = fixtures::example_4_1();
        let samples = crate::frames::darboux_samples(&fx.curve, &fx.grid).unwrap();
        let tg: Vec<f64> = samples.iter().map(|d| d.tau_g).collect();
        let acc = cumulative_integral(&tg, &fx.grid).unwrap();
        for (k, v) in acc.iter().enumerate().step_by(200) {
            assert!((v + fx.grid.at(k) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cumulative_integral_rejects_nan() {
        let g = Grid::new(0.0, 1.0, 5).unwrap();
        let f = vec![1.0, f64::NAN, 1.0, 1.0, 1.0];
        assert!(matches!(
            cumulative_integral(&f, &g),
            Err(KernelError::NonFiniteSample(_))
        ));
    }

    #[test]
    fn hcc1_on_cylinder_helix() {
        let fx = fixtures::example_4_1();
        let a = construct(HelixFamily::Hcc1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        assert_eq!(a.case_tag, CaseTag::General);
        // y2 = sin(-s/2), y3 = cos(-s/2)
        for (k, sm) in a.samples.iter().enumerate().step_by(137) {
            let s = a.grid.at(k);
            assert!((sm.y[1] - (-s / 2.0).sin()).abs() < 1e-10, "y2 at {s}");
            assert!((sm.y[2] - (-s / 2.0).cos()).abs() < 1e-10, "y3 at {s}");
        }
        // gamma(0) = alpha(0) + U(0) = origin
        assert!(a.samples[0].gamma.norm() < 1e-12);
    }

    #[test]
    fn rns1_on_helicoid_curve_collapses() {
        // k_g = -1/2 nonvanishing: y2 = 1/k_g = -2, y3 = c3 + s.
        let fx = fixtures::example_4_2();
        let a = construct(HelixFamily::Rns1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let c3 = fx.constants.get("c3").unwrap();
        for (k, sm) in a.samples.iter().enumerate().step_by(97) {
            let s = a.grid.at(k);
            assert!((sm.y[1] + 2.0).abs() < 1e-9, "y2 at {s}: {}", sm.y[1]);
            assert!((sm.y[2] - (c3 + s)).abs() < 1e-9, "y3 at {s}: {}", sm.y[2]);
        }
    }

    #[test]
    fn icc1_on_cylinder_helix_collapses() {
        // k_n = 1/2 nonvanishing, k_g = 0: y2 = c8 - s, y3 = 2.
        let fx = fixtures::example_4_1();
        let a = construct(HelixFamily::Icc1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let c8 = fx.constants.get("c8_icc1").unwrap();
        for (k, sm) in a.samples.iter().enumerate().step_by(119) {
            let s = a.grid.at(k);
            assert!((sm.y[1] - (c8 - s)).abs() < 1e-9);
            assert!((sm.y[2] - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn hcc1_on_principal_line_adds_the_normal() {
        // tau_g = 0: gamma = alpha + U.
        let fx = fixtures::plane_circle();
        let a = construct(HelixFamily::Hcc1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        for (k, sm) in a.samples.iter().enumerate().step_by(211) {
            let alpha = fx.curve.alpha.point(a.grid.at(k)).unwrap();
            assert!(sm.y[0].abs() < 1e-12 && sm.y[1].abs() < 1e-12);
            assert!((sm.y[2] - 1.0).abs() < 1e-12);
            assert!((sm.gamma - (alpha + sm.frame.u)).norm() < 1e-12);
        }
    }

    #[test]
    fn dispatch_divisor_error() {
        // hcc2 needs k_g != 0, but the cylinder helix is a geodesic.
        let fx = fixtures::example_4_1();
        match construct(HelixFamily::Hcc2, &fx.curve, &fx.constants, &fx.grid) {
            Err(KernelError::DivisorTooSmall { curvature, .. }) => assert_eq!(curvature, "k_g"),
            other => panic!("expected divisor error, got {other:?}"),
        }
    }

    #[test]
    fn dispatch_case_ambiguity() {
        // On a grid crossing s = pi/2 the wobble curve's tau_g changes sign.
        let fx = fixtures::cylinder_wobble();
        let wide = Grid::new(0.3, 2.8, 501).unwrap();
        match construct(HelixFamily::Rns3, &fx.curve, &fx.constants, &wide) {
            Err(KernelError::CaseAmbiguity { curvature, .. }) => assert_eq!(curvature, "tau_g"),
            other => panic!("expected case ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn missing_constant_error() {
        let fx = fixtures::example_4_2();
        let bare = FamilyConstants::empty();
        match construct(HelixFamily::Hcc2, &fx.curve, &bare, &fx.grid) {
            Err(KernelError::MissingConstant(name)) => assert_eq!(name, "c1"),
            other => panic!("expected missing constant, got {other:?}"),
        }
    }

    #[test]
    fn regularity_violation_on_sphere_fixtures() {
        // rns1 on the plane circle collapses gamma to a point.
        let fx = fixtures::plane_circle();
        assert!(matches!(
            construct(HelixFamily::Rns1, &fx.curve, &fx.constants, &fx.grid),
            Err(KernelError::RegularityViolation { .. })
        ));
        // Constant-curvature latitude circle: rns3 and icc2 degenerate.
        let fx = fixtures::sphere_cap();
        assert!(matches!(
            construct(HelixFamily::Rns3, &fx.curve, &fx.constants, &fx.grid),
            Err(KernelError::RegularityViolation { .. })
        ));
        assert!(matches!(
            construct(HelixFamily::Icc2, &fx.curve, &fx.constants, &fx.grid),
            Err(KernelError::RegularityViolation { .. })
        ));
    }

    #[test]
    fn rns1_zero_case_needs_nonzero_torsion() {
        // Great circle: k_g = 0 and tau_g = 0; no construction exists.
        let fx = fixtures::sphere_equator();
        match construct(HelixFamily::Rns1, &fx.curve, &fx.constants, &fx.grid) {
            Err(KernelError::DivisorTooSmall { curvature, .. }) => assert_eq!(curvature, "tau_g"),
            other => panic!("expected divisor error, got {other:?}"),
        }
    }

    #[test]
    fn ode_residuals_small_for_hcc1() {
        let fx = fixtures::example_4_1();
        let a = construct(HelixFamily::Hcc1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let r = ode_residual(&a);
        assert!(r.equality[0] < 1e-8 && r.equality[1] < 1e-8, "{r:?}");
        // |1 - (1/2) cos(s/2)| >= 1/2 on the grid
        assert!(r.inequality_min >= 0.5 - 1e-9, "{}", r.inequality_min);
    }

    #[test]
    fn ode_residual_detects_corruption() {
        let fx = fixtures::example_4_1();
        let mut a = construct(HelixFamily::Hcc1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        for (y, sm) in a.track.y2.iter_mut().zip(a.samples.iter_mut()) {
            *y *= 1.1;
            sm.y[1] *= 1.1;
        }
        let r = ode_residual(&a);
        assert!(
            r.equality.iter().cloned().fold(0.0f64, f64::max) > 1e-2,
            "{r:?}"
        );
    }

    #[test]
    fn rk4_matches_construction_hcc1() {
        let fx = fixtures::example_4_1();
        let a = construct(HelixFamily::Hcc1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let oracle = rk4_oracle(HelixFamily::Hcc1, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let dev = track_deviation(&a.track, &oracle);
        assert!(dev.iter().all(|d| *d <= 1e-8), "{dev:?}");
    }

    #[test]
    fn rk4_matches_construction_icc3_general() {
        let fx = fixtures::example_4_2();
        let a = construct(HelixFamily::Icc3, &fx.curve, &fx.constants, &fx.grid).unwrap();
        assert_eq!(a.case_tag, CaseTag::General);
        let oracle = rk4_oracle(HelixFamily::Icc3, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let dev = track_deviation(&a.track, &oracle);
        assert!(dev.iter().all(|d| *d <= 1e-8), "{dev:?}");
    }

    #[test]
    fn rk4_matches_construction_rns2_varying_curvature() {
        // The wobble fixture exercises the variation-of-parameters branch
        // with genuinely nonconstant k_n.
        let fx = fixtures::cylinder_wobble();
        let a = construct(HelixFamily::Rns2, &fx.curve, &fx.constants, &fx.grid).unwrap();
        assert_eq!(a.case_tag, CaseTag::General);
        let oracle = rk4_oracle(HelixFamily::Rns2, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let dev = track_deviation(&a.track, &oracle);
        assert!(dev.iter().all(|d| *d <= 1e-6), "{dev:?}");
    }

    #[test]
    fn hcc2_linear_in_c1() {
        let fx = fixtures::example_4_2();
        let mut c_scaled = fx.constants.clone();
        c_scaled.set("c1", 3.0);
        let base = construct(HelixFamily::Hcc2, &fx.curve, &fx.constants, &fx.grid).unwrap();
        let scaled = construct(HelixFamily::Hcc2, &fx.curve, &c_scaled, &fx.grid).unwrap();
        for k in (0..base.grid.len()).step_by(173) {
            let r1 = scaled.track.y1[k] - 3.0 * base.track.y1[k];
            let r3 = scaled.track.y3[k] - 3.0 * base.track.y3[k];
            assert!(r1.abs() <= 1e-12 * (1.0 + base.track.y1[k].abs()));
            assert!(r3.abs() <= 1e-12 * (1.0 + base.track.y3[k].abs()));
        }
    }

    fn homogeneous_residual(fixture: &fixtures::Fixture, use_kg: bool) -> f64 {
        // y = cos(theta) + sin(theta) with theta the running integral of the
        // coefficient must satisfy y'' - (q'/q) y' + q^2 y = 0; derivatives
        // by finite differences over the grid.
        let samples = crate::frames::darboux_samples(&fixture.curve, &fixture.grid).unwrap();
        let q: Vec<f64> = samples
            .iter()
            .map(|d| if use_kg { d.k_g } else { d.k_n })
            .collect();
        let dq: Vec<f64> = samples
            .iter()
            .map(|d| if use_kg { d.dk_g } else { d.dk_n })
            .collect();
        let theta = cumulative_integral(&q, &fixture.grid).unwrap();
        let y: Vec<f64> = theta.iter().map(|t| t.cos() + t.sin()).collect();
        let h = fixture.grid.spacing();
        let mut worst = 0.0f64;
        for k in 2..y.len() - 2 {
            let yp = (y[k - 2] - 8.0 * y[k - 1] + 8.0 * y[k + 1] - y[k + 2]) / (12.0 * h);
            let ypp = (-y[k - 2] + 16.0 * y[k - 1] - 30.0 * y[k] + 16.0 * y[k + 1] - y[k + 2])
                / (12.0 * h * h);
            let res = ypp - dq[k] / q[k] * yp + q[k] * q[k] * y[k];
            worst = worst.max(res.abs());
        }
        worst
    }

    #[test]
    fn homogeneous_part_satisfies_reduced_equation() {
        // Constant coefficients: quadrature is exact, only stencil roundoff
        // remains.
        assert!(homogeneous_residual(&fixtures::example_4_1(), false) < 1e-8);
        assert!(homogeneous_residual(&fixtures::example_4_2(), true) < 1e-8);
        // Varying k_n: the quadrature's O(h^4) sawtooth is amplified by the
        // second-difference stencil, so the bound is looser.
        assert!(homogeneous_residual(&fixtures::cylinder_wobble(), false) < 1e-6);
        // k_g is constant on the wobble curve, so the tight bound applies.
        assert!(homogeneous_residual(&fixtures::cylinder_wobble(), true) < 1e-8);
    }
}
