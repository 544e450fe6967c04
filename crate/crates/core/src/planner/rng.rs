//! SplitMix64 and the sampling built on it. Every draw the planner makes
//! goes through here, so a seed maps to the same outputs on every platform.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// An independent stream for one planning stage, keyed by name.
    pub fn stream(seed: u64, name: &str) -> Self {
        // FNV-1a of the stage name, folded into the seed.
        let tag = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
        });
        let mut mix = SplitMix64::new(seed ^ tag);
        Self::new(mix.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` by rejection; `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % n;
            }
        }
    }

    /// Fisher-Yates, walking from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Largest-remainder apportionment of `total` in proportion to `weights`,
/// never exceeding `caps`. Ties go to the lower index. Returns `None` when
/// the caps cannot absorb `total`.
pub fn apportion(total: usize, weights: &[usize], caps: &[usize]) -> Option<Vec<usize>> {
    debug_assert_eq!(weights.len(), caps.len());
    if caps.iter().sum::<usize>() < total {
        return None;
    }
    let weight_sum: usize = weights.iter().sum();
    if weight_sum == 0 {
        return if total == 0 { Some(vec![0; weights.len()]) } else { None };
    }
    let (t, w) = (total as u128, weight_sum as u128);
    let mut alloc: Vec<usize> = weights
        .iter()
        .zip(caps)
        .map(|(&wc, &cap)| ((t * wc as u128 / w) as usize).min(cap))
        .collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    // Stable sort keeps lower indices first among equal remainders.
    order.sort_by_key(|&i| std::cmp::Reverse(t * weights[i] as u128 % w));

    let mut left = total - alloc.iter().sum::<usize>();
    while left > 0 {
        let before = left;
        for &i in &order {
            if left == 0 {
                break;
            }
            if alloc[i] < caps[i] {
                alloc[i] += 1;
                left -= 1;
            }
        }
        if left == before {
            return None;
        }
    }
    Some(alloc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream() {
        // Published SplitMix64 outputs for seed 0.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xe220_a839_7b1d_cdaf);
        assert_eq!(r.next_u64(), 0x6e78_9e6a_a1b9_65f4);
        assert_eq!(r.next_u64(), 0x06c4_5d18_8009_454f);
    }

    #[test]
    fn streams_differ_by_name() {
        let a = SplitMix64::stream(7, "split").next_u64();
        let b = SplitMix64::stream(7, "inject").next_u64();
        assert_ne!(a, b);
        assert_eq!(a, SplitMix64::stream(7, "split").next_u64());
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut v: Vec<u32> = (0..100).collect();
        SplitMix64::new(42).shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
        assert_ne!(v, sorted);
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = SplitMix64::new(1);
        for n in [1u64, 2, 3, 7, 1000, u64::MAX] {
            for _ in 0..100 {
                assert!(r.below(n) < n);
            }
        }
    }

    #[test]
    fn apportion_cases() {
        assert_eq!(apportion(7, &[5, 5], &[5, 5]), Some(vec![4, 3]));
        assert_eq!(apportion(10, &[5, 5], &[5, 5]), Some(vec![5, 5]));
        assert_eq!(apportion(3, &[1, 1, 1], &[1, 1, 1]), Some(vec![1, 1, 1]));
        assert_eq!(apportion(5, &[9, 1], &[3, 10]), Some(vec![3, 2]));
        assert_eq!(apportion(5, &[1, 1], &[2, 2]), None);
        assert_eq!(apportion(0, &[0, 0], &[0, 0]), Some(vec![0, 0]));
    }
}
