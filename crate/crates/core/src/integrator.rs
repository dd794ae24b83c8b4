//! Explicit one-step integrators for small nonstiff systems.
//!
//! [`dopri5_step`] is the Dormand–Prince 5(4) pair with its embedded error
//! estimate and the fourth-order continuous extension; [`rk4_step`] is the
//! classical fixed-step scheme kept as an independent reference.

use crate::error::Result;

pub type State<const N: usize> = [f64; N];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the fifth- and fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[inline]
fn combine<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Interpolant over one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    r: [State<N>; 5],
}

impl<const N: usize> DenseSegment<N> {
    /// Start and end of the step.
    pub fn span(&self) -> (f64, f64) {
        (self.t0, self.t0 + self.h)
    }

    pub fn eval(&self, t: f64) -> State<N> {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.r;
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
        }
        y
    }

    /// Multiplies component `i` of the interpolant by `factor`.
    pub(crate) fn scale_component(&mut self, i: usize, factor: f64) {
        for r in &mut self.r {
            r[i] *= factor;
        }
    }
}

/// Result of one attempted Dormand–Prince step.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5Step<const N: usize> {
    pub y: State<N>,
    /// Right-hand side at the new point (first stage of the next step).
    pub f: State<N>,
    /// Scaled RMS error estimate; the step is acceptable when `<= 1`.
    pub error: f64,
    pub dense: DenseSegment<N>,
}

/// One Dormand–Prince 5(4) step of size `h` from `(t, y)` with `k1 = f(t, y)`.
pub fn dopri5_step<F, const N: usize>(
    f: &mut F,
    t: f64,
    y: &State<N>,
    k1: &State<N>,
    h: f64,
    rtol: f64,
    atol: f64,
) -> Result<Dopri5Step<N>>
where
    F: FnMut(f64, &State<N>) -> Result<State<N>>,
{
    let k2 = f(t + C2 * h, &combine(y, h, &[(A21, k1)]))?;
    let k3 = f(t + C3 * h, &combine(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(t + C4 * h, &combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(
        t + C5 * h,
        &combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = f(
        t + h,
        &combine(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y_new = combine(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(t + h, &y_new)?;

    let mut sum = 0.0;
    for i in 0..N {
        let err = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
        sum += (err / scale).powi(2);
    }
    let error = (sum / N as f64).sqrt();

    let mut r = [[0.0; N]; 5];
    for i in 0..N {
        let dy = y_new[i] - y[i];
        let bspl = h * k1[i] - dy;
        r[0][i] = y[i];
        r[1][i] = dy;
        r[2][i] = bspl;
        r[3][i] = dy - h * k7[i] - bspl;
        r[4][i] = h
            * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }

    Ok(Dopri5Step { y: y_new, f: k7, error, dense: DenseSegment { t0: t, h, r } })
}

/// Step-size update for an error estimate `error` (fifth-order local error).
pub fn next_step_size(h: f64, error: f64) -> f64 {
    const SAFETY: f64 = 0.9;
    let factor = if error == 0.0 {
        5.0
    } else {
        (SAFETY * error.powf(-0.2)).clamp(0.2, 5.0)
    };
    h * factor
}

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step<F, const N: usize>(f: &mut F, t: f64, y: &State<N>, h: f64) -> Result<State<N>>
where
    F: FnMut(f64, &State<N>) -> Result<State<N>>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &combine(y, h, &[(0.5, &k1)]))?;
    let k3 = f(t + 0.5 * h, &combine(y, h, &[(0.5, &k2)]))?;
    let k4 = f(t + h, &combine(y, h, &[(1.0, &k3)]))?;
    Ok(combine(y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]))
}
