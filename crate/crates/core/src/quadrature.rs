//! Adaptive 21-point Gauss–Kronrod quadrature with global bisection of the
//! worst panel.

use crate::error::{LabError, Result};

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const MAX_PANELS: usize = 4000;

/// Acceptance threshold `max(abs, rel * |I|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// error estimate is at the roundoff floor; splitting cannot improve it
    at_floor: bool,
}

// QUADPACK node layout: odd Kronrod nodes carry the Gauss rule.
#[allow(clippy::needless_range_loop)]
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..5 {
        let k = 2 * j + 1;
        let dx = half * XGK[k];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        gauss += WG[j] * (f1 + f2);
        kronrod += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let k = 2 * j;
        let dx = half * XGK[k];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        kronrod += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for k in 0..10 {
        res_asc += WGK[k] * ((fv1[k] - mean).abs() + (fv2[k] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    let at_floor = res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && error <= floor;
    if at_floor {
        error = floor;
    }
    Panel { a, b, value, error, at_floor }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrate over consecutive panels `[p0, p1], [p1, p2], ...`, refining the
/// panel with the largest error estimate until the total meets `tol`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<QuadResult> {
    if breaks.len() < 2 {
        return Err(LabError::InvalidArgument("quadrature needs at least two break points".into()));
    }
    let (a, b) = (breaks[0], breaks[breaks.len() - 1]);
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| gk21(&f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * panels.len();

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(LabError::QuadratureNonConvergence { a, b, err: error });
        }
        if error <= tol.target(value) {
            return Ok(QuadResult { value, error, evaluations });
        }
        if panels.len() >= MAX_PANELS {
            return Err(LabError::QuadratureNonConvergence { a, b, err: error });
        }
        let Some((worst, _)) = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.at_floor)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
        else {
            // every panel is limited by roundoff: this is as good as it gets
            return Ok(QuadResult { value, error, evaluations });
        };
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // panel cannot be split further in floating point
            return Err(LabError::QuadratureNonConvergence { a, b, err: error });
        }
        panels.push(gk21(&f, p.a, mid));
        panels.push(gk21(&f, mid, p.b));
        evaluations += 42;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, Tolerance::relative(1e-14)).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn integrates_sinh_squared() {
        // ∫_0^3 sinh² = sinh(6)/4 − 3/2
        let exact = (6.0f64).sinh() / 4.0 - 1.5;
        let r = integrate(|x: f64| x.sinh().powi(2), 0.0, 3.0, Tolerance::relative(1e-13)).unwrap();
        assert!((r.value - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn refines_peaked_integrand() {
        // ∫_{-1}^{1} 1/(1e-4 + x²) = 2·100·atan(100)
        let exact = 200.0 * (100.0f64).atan();
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::relative(1e-12)).unwrap();
        assert!((r.value - exact).abs() < 1e-10 * exact);
        assert!(r.evaluations > 21);
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let r = integrate(|x| x, 1.0, 0.0, Tolerance::relative(1e-14)).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_interval_is_zero() {
        let r = integrate(|x| x, 1.5, 1.5, Tolerance::relative(1e-14)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn non_integrable_singularity_reports_non_convergence() {
        let err = integrate(|x: f64| 1.0 / x.abs(), -1.0, 1.0, Tolerance::relative(1e-12)).unwrap_err();
        assert!(err.is_numerical());
    }
}
