//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! Infinite end points are handled with t = a ± (1 − s)/s on s ∈ (0, 1].
//! All segments of one call share a single error budget and a single
//! priority queue.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    Upper(f64),
    Lower(f64),
}

impl Map {
    #[inline]
    fn apply<F: Fn(f64) -> f64>(self, f: &F, s: f64) -> f64 {
        match self {
            Map::Identity => f(s),
            Map::Upper(a) => {
                let v = f(a + (1.0 - s) / s);
                if v == 0.0 {
                    0.0
                } else {
                    v / (s * s)
                }
            }
            Map::Lower(b) => {
                let v = f(b - (1.0 - s) / s);
                if v == 0.0 {
                    0.0
                } else {
                    v / (s * s)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> Result<(f64, f64)> {
    let centr = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let dhl = hl.abs();
    let fc = map.apply(f, centr);
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let absc = hl * XGK[j];
        let f1 = map.apply(f, centr - absc);
        let f2 = map.apply(f, centr + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    if !resk.is_finite() {
        return Err(Error::NonFinite("quadrature integrand"));
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hl;
    resabs *= dhl;
    resasc *= dhl;
    let mut err = ((resk - resg) * hl).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((result, err))
}

fn run<F: Fn(f64) -> f64>(f: &F, segments: &[(Map, f64, f64)], cfg: &QuadConfig) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for &(map, a, b) in segments {
        if a == b {
            continue;
        }
        let (value, error) = kronrod(f, map, a, b)?;
        evaluations += 21;
        total += value;
        total_err += error;
        heap.push(Piece { map, a, b, value, error });
    }
    let mut subdivisions = 0;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(Integral { value: total, error: total_err, evaluations, subdivisions });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Quadrature { estimate: total_err, tolerance: tol, subdivisions });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Integral { value: total, error: total_err, evaluations, subdivisions });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval can no longer be split in floating point
            return Err(Error::Quadrature { estimate: total_err, tolerance: tol, subdivisions });
        }
        let (v1, e1) = kronrod(f, worst.map, worst.a, mid)?;
        let (v2, e2) = kronrod(f, worst.map, mid, worst.b)?;
        evaluations += 42;
        subdivisions += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece { map: worst.map, a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { map: worst.map, a: mid, b: worst.b, value: v2, error: e2 });
        if subdivisions % 64 == 0 {
            // refresh the running sums to shed accumulated rounding
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// ∫_a^b f, where either limit may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Integral> {
    integrate_points(f, &[a, b], cfg)
}

/// Integral over consecutive segments between the given points. The first
/// and last points may be −∞ and +∞; inner points act as breakpoints.
pub fn integrate_points<F: Fn(f64) -> f64>(f: F, points: &[f64], cfg: &QuadConfig) -> Result<Integral> {
    if points.len() < 2 || points.iter().any(|p| p.is_nan()) {
        return Err(Error::domain("integrate", "need at least two non-NaN points"));
    }
    let mut pts: Vec<f64> = points.to_vec();
    let sign = if pts[0] > pts[pts.len() - 1] {
        pts.reverse();
        -1.0
    } else {
        1.0
    };
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut segments = Vec::with_capacity(pts.len());
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (a.is_infinite(), b.is_infinite()) {
            (false, false) => segments.push((Map::Identity, a, b)),
            (true, false) => segments.push((Map::Lower(b), 0.0, 1.0)),
            (false, true) => segments.push((Map::Upper(a), 0.0, 1.0)),
            (true, true) => {
                segments.push((Map::Lower(0.0), 0.0, 1.0));
                segments.push((Map::Upper(0.0), 0.0, 1.0));
            }
        }
    }
    let mut out = run(&f, &segments, cfg)?;
    out.value *= sign;
    Ok(out)
}
