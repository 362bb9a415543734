//! Row-major run-length encoding of line masks.
//!
//! Runs alternate background/foreground and always start with a background
//! run, which is zero when the first pixel is foreground.

use crate::error::{Error, Result};
use crate::mask::LineMask;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleMask {
    pub width: u32,
    pub height: u32,
    pub runs: Vec<u64>,
}

impl RleMask {
    pub fn pixel_count(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    /// Foreground pixel count, read straight off the odd runs.
    pub fn area(&self) -> u64 {
        self.runs.iter().skip(1).step_by(2).sum()
    }

    /// Checks that the runs cover the raster exactly.
    pub fn validate(&self) -> Result<()> {
        let total: u64 = self.runs.iter().sum();
        if total != self.pixel_count() {
            return Err(Error::format(
                "/runs",
                format!(
                    "runs sum to {total}, expected {} for {}x{}",
                    self.pixel_count(),
                    self.width,
                    self.height
                ),
            ));
        }
        Ok(())
    }
}

/// Encodes `m` in canonical form: no zero-length runs except a leading one.
pub fn rle_encode(m: &LineMask) -> RleMask {
    let mut runs = Vec::new();
    let mut current = false;
    let mut len = 0u64;
    for &b in m.bits() {
        if b != current {
            runs.push(len);
            len = 0;
            current = b;
        }
        len += 1;
    }
    runs.push(len);
    RleMask {
        width: m.width(),
        height: m.height(),
        runs,
    }
}

/// Decodes runs back into a mask. Non-canonical zero runs are accepted.
pub fn rle_decode(r: &RleMask) -> Result<LineMask> {
    r.validate()?;
    let mut bits = Vec::with_capacity(r.pixel_count() as usize);
    for (i, &len) in r.runs.iter().enumerate() {
        bits.extend(std::iter::repeat_n(i % 2 == 1, len as usize));
    }
    LineMask::from_bits(r.width, r.height, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn all_background() {
        assert_eq!(rle_encode(&LineMask::new(2, 2)).runs, vec![4]);
    }

    #[test]
    fn all_foreground_has_leading_zero() {
        let m = LineMask::from_bits(2, 2, vec![true; 4]).unwrap();
        assert_eq!(rle_encode(&m).runs, vec![0, 4]);
    }

    #[test]
    fn alternating_pattern() {
        let m = LineMask::from_bits(3, 1, vec![false, true, false]).unwrap();
        assert_eq!(rle_encode(&m).runs, vec![1, 1, 1]);
    }

    #[test]
    fn decode_rejects_bad_sum() {
        let r = RleMask {
            width: 2,
            height: 2,
            runs: vec![1, 2],
        };
        assert!(matches!(rle_decode(&r), Err(Error::Format { .. })));
    }

    #[test]
    fn decode_tolerates_interior_zero_runs() {
        let r = RleMask {
            width: 3,
            height: 1,
            runs: vec![1, 0, 1, 1],
        };
        let m = rle_decode(&r).unwrap();
        assert_eq!(m.bits(), &[false, false, true]);
    }

    proptest! {
        #[test]
        fn round_trip((w, h, bits) in (1u32..=64, 1u32..=64).prop_flat_map(|(w, h)| {
            (Just(w), Just(h), proptest::collection::vec(any::<bool>(), (w * h) as usize))
        })) {
            let m = LineMask::from_bits(w, h, bits).unwrap();
            let r = rle_encode(&m);
            prop_assert!(r.runs.iter().skip(1).all(|&n| n > 0));
            prop_assert_eq!(r.area() as usize, m.count());
            prop_assert_eq!(rle_decode(&r).unwrap(), m);
        }
    }
}
