//! Adaptive Gauss–Kronrod (10/21) quadrature with vector-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::QuadratureSpec;
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_982_970_245_781,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], .., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One 21-point Kronrod panel; returns (integral, error estimate).
pub(crate) fn panel<const N: usize, F: FnMut(f64) -> [f64; N]>(
    f: &mut F,
    a: f64,
    b: f64,
) -> ([f64; N], f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let mut fv = [[0.0; N]; 21];
    fv[20] = fc;
    for i in 0..N {
        k[i] = WGK[10] * fc[i];
    }
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        for i in 0..N {
            k[i] += WGK[j] * (f1[i] + f2[i]);
            if j % 2 == 1 {
                g[i] += WG[j / 2] * (f1[i] + f2[i]);
            }
        }
    }
    let mut err: f64 = 0.0;
    for i in 0..N {
        let mean = 0.5 * k[i];
        let mut resasc = WGK[10] * (fc[i] - mean).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((fv[2 * j][i] - mean).abs() + (fv[2 * j + 1][i] - mean).abs());
        }
        resasc *= h.abs();
        let mut e = ((k[i] - g[i]) * h).abs();
        if resasc != 0.0 && e != 0.0 {
            e = resasc * (1.0f64).min((200.0 * e / resasc).powf(1.5));
        }
        if !e.is_finite() {
            e = f64::INFINITY;
        }
        err = err.max(e);
    }
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = k[i] * h;
    }
    (out, err)
}

struct Interval<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    err: f64,
}

impl<const N: usize> PartialEq for Interval<N> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<const N: usize> Eq for Interval<N> {}
impl<const N: usize> PartialOrd for Interval<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Interval<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Adaptive bisection on [a, b]. Returns (value, error, converged).
pub(crate) fn adaptive<const N: usize, F: FnMut(f64) -> [f64; N]>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> ([f64; N], f64, bool) {
    if a == b {
        return ([0.0; N], 0.0, true);
    }
    let (v, e) = panel(f, a, b);
    if e <= abs_tol.max(rel_tol * norm(&v)) {
        return (v, e, true);
    }
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    let mut splits = 0;
    while splits < max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b))
            || (worst.b - worst.a).abs() < 1e-15 * worst.a.abs().max(worst.b.abs())
        {
            // interval cannot be refined further; keep it but stop splitting
            heap.push(worst);
            break;
        }
        let (v1, e1) = panel(f, worst.a, mid);
        let (v2, e2) = panel(f, mid, worst.b);
        for i in 0..N {
            total[i] += v1[i] + v2[i] - worst.value[i];
        }
        total_err += e1 + e2 - worst.err;
        heap.push(Interval { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Interval { a: mid, b: worst.b, value: v2, err: e2 });
        splits += 1;
        if total_err <= abs_tol.max(rel_tol * norm(&total)) {
            // resum to shed accumulated rounding from the running updates
            let mut sum = [0.0; N];
            let mut err = 0.0;
            for iv in heap.iter() {
                for i in 0..N {
                    sum[i] += iv.value[i];
                }
                err += iv.err;
            }
            return (sum, err, true);
        }
    }
    let mut sum = [0.0; N];
    let mut err = 0.0;
    for iv in heap.iter() {
        for i in 0..N {
            sum[i] += iv.value[i];
        }
        err += iv.err;
    }
    let ok = err <= abs_tol.max(rel_tol * norm(&sum));
    (sum, err, ok)
}

/// ∫_a^b f(x) dx for scalar integrands.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mut g = |x: f64| [f(x)];
    let (v, e, ok) = adaptive(&mut g, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
    if ok {
        Ok(v[0])
    } else {
        Err(Error::NonConvergence { partial: v[0], bound: e })
    }
}

/// ∫_a^b f(x) dx for integrands returning N components evaluated together.
pub fn integrate_vec<const N: usize, F: FnMut(f64) -> [f64; N]>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<([f64; N], f64)> {
    let (v, e, ok) = adaptive(&mut f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
    if ok {
        Ok((v, e))
    } else {
        Err(Error::NonConvergence { partial: norm(&v), bound: e })
    }
}

const MIN_PANELS: usize = 6;
const MAX_PANELS: usize = 400;

/// Doubling-panel integration of [lower, ∞). Returns (value, error, converged).
pub(crate) fn semi_infinite<const N: usize, F: FnMut(f64) -> [f64; N]>(
    mut f: F,
    lower: f64,
    spec: &QuadratureSpec,
) -> ([f64; N], f64, bool) {
    let mut total = [0.0; N];
    let mut err = 0.0;
    let mut a = lower;
    let mut width = spec.initial_panel;
    let mut quiet = 0;
    let mut ok = true;
    for k in 0..MAX_PANELS {
        let b = a + width;
        let tol_abs = spec.abs_tol / 4.0;
        let (v, e, conv) = adaptive(&mut f, a, b, tol_abs, spec.rel_tol, spec.max_subdivisions);
        ok &= conv;
        for i in 0..N {
            total[i] += v[i];
        }
        err += e;
        let contribution = norm(&v);
        if contribution <= spec.tail_cutoff_envelope * norm(&total) || contribution <= spec.abs_tol * 1e-3 {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if k + 1 >= MIN_PANELS && quiet >= 2 {
            return (total, err, ok);
        }
        a = b;
        width *= 2.0;
        if !a.is_finite() {
            break;
        }
    }
    (total, err, false)
}
