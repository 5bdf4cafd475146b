//! Traveling-wave (kink) profile generator. The profile solves the reduced
//! ODE system in the co-moving coordinate z = x - c t:
//!   (c + 1) w1' = N(w1, w2) w2,
//!   (1 - c) w2' = N(w1, w2) w1,
//! integrated from an exponentially small seed near the origin out to its
//! saturation on the unit circle. Dense output from the integrator lets the
//! profile be evaluated at arbitrary z afterwards.

use crate::model::Nonlinearity;
use crate::{Error, Result};

/// Conserved quantity of the reduced system:
/// Q = c (w1^2 + w2^2) + w1^2 - w2^2.
pub fn q_invariant(w1: f64, w2: f64, c: f64) -> f64 {
    c * (w1 * w1 + w2 * w2) + w1 * w1 - w2 * w2
}

/// Right-hand side of the reduced system. Speeds with |c| >= 1 make one of
/// the equations degenerate.
pub fn kink_rhs(w1: f64, w2: f64, c: f64, nl: Nonlinearity) -> Result<(f64, f64)> {
    if c.abs() >= 1.0 {
        if (c.abs() - 1.0).abs() < f64::EPSILON {
            return Err(Error::DegenerateSpeed);
        }
        return Err(Error::SupersonicSpeed(c));
    }
    let n = nl.eval(w1, w2);
    Ok((n * w2 / (c + 1.0), n * w1 / (1.0 - c)))
}

/// Seed used throughout for the c = 0.4 kink: a sub-underflow-scale state
/// on the outgoing branch of the origin saddle.
pub const SEED_C04: (f64, f64) = (
    -7.0 * std::f64::consts::SQRT_2 * 1e-51,
    -3.0 * std::f64::consts::SQRT_2 * 1e-51,
);

// Dormand-Prince 5(4) coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type V2 = [f64; 2];

/// Fourth-order dense-output segment covering [z0, z0 + h].
#[derive(Clone, Debug)]
struct Segment {
    z0: f64,
    h: f64,
    rcont: [V2; 5],
}

impl Segment {
    fn eval(&self, z: f64) -> V2 {
        let theta = (z - self.z0) / self.h;
        let th1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = self.rcont[0][i]
                + theta
                    * (self.rcont[1][i]
                        + th1 * (self.rcont[2][i] + theta * (self.rcont[3][i] + th1 * self.rcont[4][i])));
        }
        out
    }
}

/// A generated kink profile. `eval` takes the translated coordinate in
/// which the modulus-1/2 crossing sits at `z_center`; before the stored
/// trajectory the profile is the origin fixed point, after it the
/// unit-circle asymptote.
#[derive(Clone, Debug)]
pub struct KinkProfile {
    pub c: f64,
    /// Translated coordinate of the modulus-1/2 crossing.
    pub z_center: f64,
    /// Raw integration coordinate of that crossing.
    pub z_cross_raw: f64,
    pub asymptote: (f64, f64),
    segments: Vec<Segment>,
    z_end_raw: f64,
}

impl KinkProfile {
    /// Profile value at translated coordinate z.
    pub fn eval(&self, z: f64) -> (f64, f64) {
        let raw = z - self.z_center + self.z_cross_raw;
        if raw <= 0.0 {
            return (0.0, 0.0);
        }
        if raw >= self.z_end_raw {
            return self.asymptote;
        }
        let idx = self
            .segments
            .partition_point(|s| s.z0 + s.h < raw)
            .min(self.segments.len() - 1);
        let v = self.segments[idx].eval(raw);
        (v[0], v[1])
    }

    pub fn q_at(&self, z: f64) -> f64 {
        let (w1, w2) = self.eval(z);
        q_invariant(w1, w2, self.c)
    }

    /// (z, w1, w2, Q) rows over an inclusive equispaced grid.
    pub fn sample(&self, z_min: f64, z_max: f64, n: usize) -> Vec<(f64, f64, f64, f64)> {
        assert!(n >= 2 && z_max > z_min);
        (0..n)
            .map(|i| {
                let z = z_min + (z_max - z_min) * i as f64 / (n - 1) as f64;
                let (w1, w2) = self.eval(z);
                (z, w1, w2, q_invariant(w1, w2, self.c))
            })
            .collect()
    }

    /// Largest |Q| over the stored trajectory (Q -> 0 at both asymptotes, so
    /// this is pure integration drift).
    pub fn max_q_drift(&self, n_samples: usize) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..=n_samples {
            let raw = self.z_end_raw * i as f64 / n_samples as f64;
            let z = raw - self.z_cross_raw + self.z_center;
            worst = worst.max(self.q_at(z).abs());
        }
        worst
    }
}

/// Integrate the reduced system from `seed` at z = 0 until the trajectory
/// settles on the unit circle, then recenter so the modulus-1/2 crossing
/// sits at `z_center`. Error control is essentially relative (`rtol`, with a
/// vanishing absolute floor) because the trajectory spans ~50 decades.
pub fn generate_kink(c: f64, seed: (f64, f64), z_center: f64, rtol: f64) -> Result<KinkProfile> {
    let nl = Nonlinearity::Sech;
    let (s1, s2) = seed;
    let smod = s1.hypot(s2);
    if !smod.is_finite() || smod == 0.0 || smod > 1e-10 {
        return Err(Error::BadSeed(s1, s2));
    }
    // reject speeds up front (kink_rhs re-checks per call)
    kink_rhs(s1, s2, c, nl)?;

    let atol = 1e-280;
    let f = |y: &V2| -> V2 {
        let (d1, d2) = kink_rhs(y[0], y[1], c, nl).expect("speed validated above");
        [d1, d2]
    };

    let mut z = 0.0_f64;
    let mut y: V2 = [s1, s2];
    let mut k1 = f(&y);
    let mut h: f64 = 1e-3;
    let z_guard = 800.0;
    let settle = 1e-13;
    let mut segments: Vec<Segment> = Vec::new();

    while z < z_guard {
        let m = y[0].hypot(y[1]);
        if m > 1.5 {
            return Err(Error::NotAKink { z });
        }
        if (m - 1.0).abs() < settle && !segments.is_empty() {
            break;
        }
        h = h.min(z_guard - z);
        // the seven stages (k7 is FSAL)
        let mut yt = [0.0; 2];
        for i in 0..2 {
            yt[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = f(&yt);
        for i in 0..2 {
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(&yt);
        for i in 0..2 {
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(&yt);
        for i in 0..2 {
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(&yt);
        for i in 0..2 {
            yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(&yt);
        let mut y1 = [0.0; 2];
        for i in 0..2 {
            y1[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = f(&y1);
        // embedded 4th-order error estimate
        let mut err = 0.0;
        for i in 0..2 {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = atol + rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / 2.0).sqrt();
        if err <= 1.0 {
            // accept: build the dense-output segment
            let mut rcont = [[0.0; 2]; 5];
            for i in 0..2 {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k7[i] - bspl;
                rcont[4][i] = h
                    * (D1 * k1[i]
                        + D3 * k3[i]
                        + D4 * k4[i]
                        + D5 * k5[i]
                        + D6 * k6[i]
                        + D7 * k7[i]);
            }
            segments.push(Segment { z0: z, h, rcont });
            z += h;
            y = y1;
            k1 = k7;
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
        if !h.is_finite() || h < 1e-14 {
            return Err(Error::NotAKink { z });
        }
    }
    let m_end = y[0].hypot(y[1]);
    if (m_end - 1.0).abs() > 1e-10 {
        return Err(Error::NotAKink { z });
    }
    let z_end_raw = z;
    let asymptote = (y[0], y[1]);

    // locate the modulus-1/2 crossing by bisection over the dense output
    let modulus_at = |zr: f64| -> f64 {
        let idx = segments
            .partition_point(|s| s.z0 + s.h < zr)
            .min(segments.len() - 1);
        let v = segments[idx].eval(zr);
        v[0].hypot(v[1])
    };
    let mut lo = 0.0;
    let mut hi = z_end_raw;
    if modulus_at(hi) < 0.5 {
        return Err(Error::NotAKink { z: hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if modulus_at(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z_cross_raw = 0.5 * (lo + hi);

    Ok(KinkProfile {
        c,
        z_center,
        z_cross_raw,
        asymptote,
        segments,
        z_end_raw,
    })
}
