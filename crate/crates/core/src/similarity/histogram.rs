use serde::{Deserialize, Serialize};

use super::SimilarityError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width bins over `[lo, hi]`. Bins are right-open except the last,
/// which also takes scores equal to `hi`; out-of-range scores are dropped.
pub fn histogram<S>(scores: &[S], bin_count: usize, range: (f64, f64)) -> Result<Vec<HistogramBin>, SimilarityError>
where
    S: Copy + Into<f64>,
{
    let (lo, hi) = range;
    if bin_count == 0 {
        return Err(SimilarityError::BadRange("bin count must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(SimilarityError::BadRange(format!("[{lo}, {hi}]")));
    }
    let width = (hi - lo) / bin_count as f64;
    let edge = |i: usize| if i == bin_count { hi } else { lo + width * i as f64 };
    let mut bins: Vec<HistogramBin> = (0..bin_count)
        .map(|i| HistogramBin {
            lo: edge(i),
            hi: edge(i + 1),
            count: 0,
        })
        .collect();
    for &s in scores {
        let v: f64 = s.into();
        if !(lo..=hi).contains(&v) {
            continue;
        }
        let mut i = (((v - lo) / width).floor() as usize).min(bin_count - 1);
        // Guard the computed index against edge rounding.
        while i > 0 && v < bins[i].lo {
            i -= 1;
        }
        while i + 1 < bin_count && v >= bins[i + 1].lo {
            i += 1;
        }
        bins[i].count += 1;
    }
    Ok(bins)
}
