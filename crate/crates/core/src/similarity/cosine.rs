use super::SimilarityError;

/// A cosine similarity in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for SimilarityScore {
    /// Wraps a raw value, clamping into [-1, 1].
    fn from(v: f64) -> Self {
        SimilarityScore(v.clamp(-1.0, 1.0))
    }
}

impl From<SimilarityScore> for f64 {
    fn from(s: SimilarityScore) -> f64 {
        s.0
    }
}

/// `x.y / (|x| |y|)`, accumulated in f64 and clamped to [-1, 1].
pub fn cosine_similarity<T>(x: &[T], y: &[T]) -> Result<SimilarityScore, SimilarityError>
where
    T: Copy + Into<f64>,
{
    if x.len() != y.len() {
        return Err(SimilarityError::LengthMismatch(x.len(), y.len()));
    }
    let (mut dot, mut xx, mut yy) = (0.0f64, 0.0f64, 0.0f64);
    for (&a, &b) in x.iter().zip(y) {
        let (a, b): (f64, f64) = (a.into(), b.into());
        dot += a * b;
        xx += a * a;
        yy += b * b;
    }
    if xx == 0.0 || yy == 0.0 {
        return Err(SimilarityError::ZeroVector);
    }
    Ok(SimilarityScore((dot / (xx.sqrt() * yy.sqrt())).clamp(-1.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cs(x: &[f64], y: &[f64]) -> f64 {
        cosine_similarity(x, y).unwrap().value()
    }

    #[test]
    fn analytic_cases() {
        let x = [1.0, 0.0, 0.0, 0.0];
        let y = [1.0, 1.0, 0.0, 0.0];
        assert!((cs(&x, &y) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(cs(&x, &x), 1.0);
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        assert!((cs(&y, &neg) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(
            cosine_similarity(&[0.0f32, 0.0], &[1.0, 2.0]),
            Err(SimilarityError::ZeroVector)
        );
        assert_eq!(
            cosine_similarity(&[1.0f32], &[1.0, 2.0]),
            Err(SimilarityError::LengthMismatch(1, 2))
        );
    }

    proptest! {
        #[test]
        fn properties(
            x in proptest::collection::vec(-10.0f64..10.0, 16),
            y in proptest::collection::vec(-10.0f64..10.0, 16),
            a in 0.001f64..1000.0,
            b in 0.001f64..1000.0,
        ) {
            prop_assume!(x.iter().any(|v| *v != 0.0) && y.iter().any(|v| *v != 0.0));
            let s = cs(&x, &y);
            prop_assert!((-1.0..=1.0).contains(&s));
            prop_assert!((s - cs(&y, &x)).abs() <= 1e-12);
            prop_assert!((cs(&x, &x) - 1.0).abs() <= 1e-9);
            let ax: Vec<f64> = x.iter().map(|v| v * a).collect();
            let by: Vec<f64> = y.iter().map(|v| v * b).collect();
            prop_assert!((cs(&ax, &by) - s).abs() <= 1e-9);
        }
    }
}
