//! Numerical integration: globally adaptive 7/15-point Gauss-Kronrod on
//! finite intervals, and composite Simpson on uniform samples.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

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

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate { value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive Gauss-Kronrod integration.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Number of equal panels the interval is cut into before adapting.
    pub initial_panels: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive { abs_tol: 1e-10, rel_tol: 1e-10, max_panels: 2000, initial_panels: 1 }
    }
}

impl Adaptive {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Adaptive { abs_tol, rel_tol: 0.0, ..Default::default() }
    }

    pub fn panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<Estimate> {
        let mut heap = BinaryHeap::new();
        let step = (b - a) / self.initial_panels as f64;
        for i in 0..self.initial_panels {
            let lo = a + step * i as f64;
            let hi = if i + 1 == self.initial_panels { b } else { lo + step };
            heap.push(Panel { a: lo, b: hi, est: gk15(&mut f, lo, hi) });
        }
        let mut value: f64 = heap.iter().map(|p| p.est.value).sum();
        let mut error: f64 = heap.iter().map(|p| p.est.error).sum();
        loop {
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                // Running sums drift; confirm with a fresh ordered total.
                let (v, e) = totals(&heap);
                if e <= self.abs_tol.max(self.rel_tol * v.abs()) {
                    return Ok(Estimate { value: v, error: e });
                }
                value = v;
                error = e;
            }
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if heap.len() >= self.max_panels {
                return Err(Error::Accuracy { estimate: totals(&heap).0, tol: target });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Panel cannot be split further in floating point.
                return Err(Error::Accuracy { estimate: totals(&heap).0 + worst.est.value, tol: target });
            }
            let left = gk15(&mut f, worst.a, mid);
            let right = gk15(&mut f, mid, worst.b);
            value += left.value + right.value - worst.est.value;
            error += left.error + right.error - worst.est.error;
            heap.push(Panel { a: worst.a, b: mid, est: left });
            heap.push(Panel { a: mid, b: worst.b, est: right });
        }
    }
}

/// Order-independent totals: panels are summed left to right.
fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = neumaier_sum(panels.iter().map(|p| p.est.value));
    let error = panels.iter().map(|p| p.est.error).sum();
    (value, error)
}

/// Compensated summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Composite Simpson rule over uniformly spaced samples; needs an odd
/// number of samples (an even number of intervals).
pub fn simpson<T>(samples: &[T], h: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    assert!(samples.len() >= 3 && samples.len() % 2 == 1, "Simpson needs an odd sample count");
    let last = samples.len() - 1;
    let mut acc = samples[0] + samples[last];
    for (i, &s) in samples.iter().enumerate().take(last).skip(1) {
        acc = acc + s * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * (h / 3.0)
}
