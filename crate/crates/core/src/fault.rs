//! Test-build fault injection. With the `fault-injection` feature enabled,
//! `HERALDLAB_FAULT=hyp2f1` makes every terminating 2F1 evaluation return a
//! slightly wrong value. Without the feature this compiles to nothing.

#[cfg(feature = "fault-injection")]
pub(crate) fn perturb_2f1(v: f64) -> f64 {
    use std::sync::OnceLock;
    static ACTIVE: OnceLock<bool> = OnceLock::new();
    let active = *ACTIVE.get_or_init(|| {
        std::env::var("HERALDLAB_FAULT").map(|s| s.split(',').any(|f| f.trim() == "hyp2f1")).unwrap_or(false)
    });
    if active {
        v * 1.01 + 1e-3
    } else {
        v
    }
}

#[cfg(not(feature = "fault-injection"))]
#[inline(always)]
pub(crate) fn perturb_2f1(v: f64) -> f64 {
    v
}
