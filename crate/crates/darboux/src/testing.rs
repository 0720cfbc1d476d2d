//! Deterministic generators shared by the randomized test suites.
//! Not part of the public API surface.

use crate::expr::{parse, Expr};
use crate::geometry::Vec3;

/// SplitMix64: tiny, seedable, reproducible.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// A random expression over the grammar, built so that every subexpression
/// stays inside the domain of its enclosing function for s in [-2, 2]
/// (log and sqrt arguments are offset positive, divisors bounded away from
/// zero, exp arguments kept small).
pub fn random_expression(rng: &mut SplitMix64, depth: usize) -> String {
    let atom = |rng: &mut SplitMix64| -> String {
        match rng.below(3) {
            0 => "s".to_string(),
            1 => format!("{:.3}", rng.range(-2.0, 2.0)),
            _ => format!("{:.3}*s", rng.range(-1.5, 1.5)),
        }
    };
    if depth == 0 {
        return atom(rng);
    }
    let sub = |rng: &mut SplitMix64| random_expression(rng, depth - 1);
    match rng.below(12) {
        0 => format!("({} + {})", sub(rng), random_expression(rng, depth - 1)),
        1 => format!("({} - {})", sub(rng), random_expression(rng, depth - 1)),
        2 => format!("({})*({})", sub(rng), random_expression(rng, depth - 1)),
        // divisor bounded away from zero
        3 => format!(
            "({})/(2.25 + sin({}))",
            sub(rng),
            random_expression(rng, depth - 1)
        ),
        4 => format!("sin({})", sub(rng)),
        5 => format!("cos({})", sub(rng)),
        6 => match rng.below(2) {
            0 => format!("atan({})", sub(rng)),
            // argument bounded inside (-pi/2, pi/2)
            _ => format!("tan(0.5*sin({}))", sub(rng)),
        },
        // keep hyperbolic/exponential arguments bounded
        7 => format!("sinh(0.3*sin({}))", sub(rng)),
        8 => format!("exp(0.4*cos({}))", sub(rng)),
        9 => format!("log(2.5 + sin({}))", sub(rng)),
        10 => format!("sqrt(1.5 + cos({}))", sub(rng)),
        _ => format!("({})^{}", atom(rng), 1 + rng.below(3)),
    }
}

/// Parse helper for the generator output.
pub fn random_parsed(rng: &mut SplitMix64, depth: usize) -> Expr {
    parse(&random_expression(rng, depth)).expect("generator output must parse")
}

/// Uniform random unit vector.
pub fn random_unit(rng: &mut SplitMix64) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.range(-1.0, 1.0),
            rng.range(-1.0, 1.0),
            rng.range(-1.0, 1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Random rotation matrix (rows), via a normalized quaternion.
pub fn random_rotation(rng: &mut SplitMix64) -> [[f64; 3]; 3] {
    let (mut q, mut n2) = ([0.0f64; 4], 0.0);
    while n2 < 1e-6 {
        for slot in q.iter_mut() {
            *slot = rng.range(-1.0, 1.0);
        }
        n2 = q.iter().map(|x| x * x).sum();
    }
    let n = n2.sqrt();
    let (w, x, y, z) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

pub fn apply_rotation(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}
