/// Slack subtracted from real-valued bounds before rounding up.
pub(crate) const BOUND_SLACK: f64 = 1e-9;

/// `⌈x − 1e-9⌉` clamped at zero: the smallest integer count that satisfies a
/// real-valued lower bound `x`.
pub(crate) fn required_count(x: f64) -> usize {
    let c = (x - BOUND_SLACK).ceil();
    if c <= 0.0 {
        0
    } else {
        c as usize
    }
}

pub(crate) fn log_base(x: f64, base: f64) -> f64 {
    x.ln() / base.ln()
}

/// Largest `r` with `r³ ≤ n`.
pub(crate) fn icbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt().round() as u64;
    while r > 0 && r.saturating_mul(r).saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_roots() {
        assert_eq!(icbrt(0), 0);
        assert_eq!(icbrt(7), 1);
        assert_eq!(icbrt(8), 2);
        assert_eq!(icbrt(512), 8);
        assert_eq!(icbrt(999), 9);
        assert_eq!(icbrt(1000), 10);
    }

    #[test]
    fn required_count_rounds_up_with_slack() {
        assert_eq!(required_count(2.0), 2);
        assert_eq!(required_count(2.0 + 1e-12), 2);
        assert_eq!(required_count(2.1), 3);
        assert_eq!(required_count(-3.0), 0);
    }
}
