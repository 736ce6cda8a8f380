//! Adaptive Gauss-Kronrod quadrature (15-point Kronrod rule with its embedded
//! 7-point Gauss rule).

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs_k = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let value = k * h;
    let roundoff = 50.0 * f64::EPSILON * abs_k * h.abs();
    Segment {
        a,
        b,
        value,
        error: ((k - g) * h).abs().max(roundoff),
    }
}

/// `∫_a^b f` over a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> QuadResult {
    integrate_points(f, &[a, b], opts)
}

/// `∫ f` over `[points[0], points[last]]`, with the interior points used as
/// initial breakpoints.
pub fn integrate_points<F: Fn(f64) -> f64>(f: F, points: &[f64], opts: QuadOptions) -> QuadResult {
    assert!(points.len() >= 2, "need at least two points");
    let mut segs: Vec<Segment> = points
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| gk15(&f, w[0], w[1]))
        .collect();
    if segs.is_empty() {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            converged: true,
        };
    }
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target || segs.len() >= opts.max_intervals {
            return QuadResult {
                value,
                error,
                intervals: segs.len(),
                converged: error <= target,
            };
        }
        let (idx, worst) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, s)| (i, *s))
            .unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            return QuadResult {
                value,
                error,
                intervals: segs.len(),
                converged: false,
            };
        }
        segs[idx] = gk15(&f, worst.a, mid);
        segs.push(gk15(&f, mid, worst.b));
    }
}

/// `∫_a^∞ f` through `x = a + t/(1−t)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, opts: QuadOptions) -> QuadResult {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        let v = f(a + t / s);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    integrate(g, 0.0, 1.0, opts)
}

/// `∫_{−∞}^{∞} f` as two half-lines split at `center`.
pub fn integrate_real_line<F: Fn(f64) -> f64>(f: F, center: f64, opts: QuadOptions) -> QuadResult {
    let right = integrate_to_inf(&f, center, opts);
    let left = integrate_to_inf(|x| f(2.0 * center - x), center, opts);
    QuadResult {
        value: left.value + right.value,
        error: left.error + right.error,
        intervals: left.intervals + right.intervals,
        converged: left.converged && right.converged,
    }
}
