use super::SimilarityError;

/// Name of the skewness estimator, recorded alongside emitted statistics.
pub const SKEWNESS_ESTIMATOR: &str = "adjusted Fisher-Pearson G1";

/// Summary of a score distribution. `sd` is the sample SD (n - 1);
/// `skewness` is G1. A zero-spread sample reports skewness 0 and sets
/// `degenerate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionStats {
    pub sample_size: usize,
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
    pub degenerate: bool,
}

/// Two-pass mean, then central moments:
/// `G1 = g1 * sqrt(n (n - 1)) / (n - 2)` with `g1 = m3 / m2^1.5`.
pub fn distribution_stats<S>(scores: &[S]) -> Result<DistributionStats, SimilarityError>
where
    S: Copy + Into<f64>,
{
    let n = scores.len();
    if n < 3 {
        return Err(SimilarityError::TooFewSamples(n));
    }
    let nf = n as f64;
    let mean = scores.iter().map(|&s| s.into()).sum::<f64>() / nf;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &s in scores {
        let d = s.into() - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
    }
    // Treat spread at rounding-noise level as zero.
    let degenerate = m2.sqrt() <= 4.0 * f64::EPSILON * mean.abs() * nf.sqrt() || m2 == 0.0;
    let sd = if degenerate { 0.0 } else { (m2 / (nf - 1.0)).sqrt() };
    m2 /= nf;
    m3 /= nf;
    let skewness = if degenerate {
        0.0
    } else {
        let g1 = m3 / m2.powf(1.5);
        g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
    };
    Ok(DistributionStats {
        sample_size: n,
        mean,
        sd,
        skewness,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sample_is_degenerate() {
        let s = distribution_stats(&[0.5f64; 4]).unwrap();
        assert_eq!((s.mean, s.sd, s.skewness, s.degenerate), (0.5, 0.0, 0.0, true));
        // 0.1 is inexact; the mean may drift by an ulp but the sample is still flat.
        let s = distribution_stats(&[0.1f64; 7]).unwrap();
        assert_eq!((s.sd, s.skewness, s.degenerate), (0.0, 0.0, true));
    }

    #[test]
    fn symmetric_sample_has_no_skew() {
        let s = distribution_stats(&[0.2f64, 0.5, 0.8]).unwrap();
        assert!(s.skewness.abs() < 1e-12);
        assert!(!s.degenerate);
    }

    #[test]
    fn pinned_oracle_values() {
        // Expected values from scipy: mean, std(ddof=1), skew(bias=False).
        let s = distribution_stats(&[0.1f64, 0.2, 0.7]).unwrap();
        assert_eq!(s.sample_size, 3);
        assert!((s.mean - 0.3333333333333333).abs() < 1e-12);
        assert!((s.sd - 0.3214550253664318).abs() < 1e-12);
        assert!((s.skewness - 1.5453925256950205).abs() < 1e-12);

        let s = distribution_stats(&[2.0f64, 8.0, 0.0, 4.0, 1.0, 9.0, 9.0, 0.0]).unwrap();
        assert!((s.skewness - 0.3305821804079746).abs() < 1e-12);
    }

    #[test]
    fn too_few() {
        assert_eq!(
            distribution_stats(&[0.1f64, 0.2]),
            Err(SimilarityError::TooFewSamples(2))
        );
    }

    #[test]
    fn accepts_scores() {
        use crate::similarity::SimilarityScore;
        let scores: Vec<SimilarityScore> = [0.1, 0.2, 0.7].into_iter().map(SimilarityScore::from).collect();
        assert_eq!(distribution_stats(&scores).unwrap().sample_size, 3);
    }
}
