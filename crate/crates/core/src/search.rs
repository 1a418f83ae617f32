//! One-dimensional golden-section minimization.

/// `(3 - √5) / 2`, the fraction of the bracket at which interior points sit.
const INV_PHI_SQ: f64 = 0.381_966_011_250_105_1;

/// Minimizes `f` on `[lo, hi]` with a fixed number of golden-section
/// steps. Returns the best point seen (interior probes and both ends) and
/// its value. Deterministic for a deterministic `f`.
pub fn golden_section<F>(f: F, lo: f64, hi: f64, iters: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut best = (a, f(a));
    let fb = f(b);
    if fb < best.1 {
        best = (b, fb);
    }

    let mut x1 = a + INV_PHI_SQ * (b - a);
    let mut x2 = b - INV_PHI_SQ * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_PHI_SQ * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_PHI_SQ * (b - a);
            f2 = f(x2);
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 60);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn minimum_at_boundary() {
        let (x, _) = golden_section(|x| x, 0.0, 1.0, 10);
        assert_eq!(x, 0.0);
    }

    #[test]
    fn reversed_bracket() {
        let (x, _) = golden_section(|x| (x + 0.5).abs(), 1.0, -1.0, 80);
        assert!((x + 0.5).abs() < 1e-12);
    }
}
