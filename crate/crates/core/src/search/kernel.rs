//! Bit-parallel evaluation of a digit set given as a bit mask.
//!
//! `once`/`twice` accumulate `mask << a` over the digits `a` as a
//! carry-save pair, so after the loop `once` is the support of `A + A` and
//! `twice` marks sums with at least two ordered representations. Interval
//! types then follow from two shifts, with no per-pair loop.

use crate::typing::Matrix2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelEval {
    pub good: bool,
    pub matrix: Matrix2,
}

/// Largest base handled by the single-word path.
pub const MAX_WORD_N: u64 = 32;

#[inline]
fn low_bits(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// `mask` holds digits `0..n`, `n <= 32`.
#[inline]
pub fn evaluate_mask(mask: u64, n: u32) -> KernelEval {
    debug_assert!(n as u64 <= MAX_WORD_N);
    let mut once = 0u64;
    let mut twice = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let a = rest.trailing_zeros();
        rest &= rest - 1;
        let s = mask << a;
        twice |= once & s;
        once |= s;
    }
    let sums = low_bits(2 * n - 1);
    let missing = !once & sums;
    let good = missing & (missing >> 1) == 0;

    let unique = once & !twice;
    let l_type = unique & !(once << 1);
    let r_type = (unique << 1) & !once & low_bits(2 * n);
    let lower = low_bits(n);
    KernelEval {
        good,
        matrix: Matrix2::new(
            (l_type & lower).count_ones() as u64,
            (r_type & lower).count_ones() as u64,
            (l_type & !lower).count_ones() as u64,
            (r_type & !lower).count_ones() as u64,
        ),
    }
}

/// Multi-word bit set over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WideMask {
    n: u64,
    words: Vec<u64>,
}

impl WideMask {
    /// Words sized for sums up to `2n - 1`.
    pub fn new(n: u64) -> Self {
        WideMask {
            n,
            words: vec![0; (2 * n as usize) / 64 + 1],
        }
    }

    pub fn from_digits(n: u64, digits: &[u64]) -> Self {
        let mut m = WideMask::new(n);
        for &d in digits {
            m.set(d, true);
        }
        m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: u64, on: bool) {
        let w = &mut self.words[(i / 64) as usize];
        if on {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: u64) {
        self.set(i, !self.get(i));
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn digits(&self) -> Vec<u64> {
        (0..self.n).filter(|&i| self.get(i)).collect()
    }

    /// Same evaluation as [`evaluate_mask`] for any `n`.
    pub fn evaluate(&self) -> KernelEval {
        let n = self.n;
        let w = self.words.len();
        let mut once = vec![0u64; w];
        let mut twice = vec![0u64; w];
        for a in self.digits() {
            let (q, r) = ((a / 64) as usize, (a % 64) as u32);
            for i in q..w {
                let hi = self.words[i - q] << r;
                let lo = if r > 0 && i > q {
                    self.words[i - q - 1] >> (64 - r)
                } else {
                    0
                };
                let s = hi | lo;
                twice[i] |= once[i] & s;
                once[i] |= s;
            }
        }
        let bit = |v: &[u64], i: i64| i >= 0 && v[(i / 64) as usize] >> (i % 64) & 1 == 1;
        let mut good = true;
        for l in 0..(2 * n - 2) as i64 {
            if !bit(&once, l) && !bit(&once, l + 1) {
                good = false;
                break;
            }
        }
        let mut m = Matrix2::new(0, 0, 0, 0);
        for l in 0..(2 * n) as i64 {
            let here = (bit(&once, l), bit(&twice, l));
            let before = (bit(&once, l - 1), bit(&twice, l - 1));
            let is_l = here == (true, false) && !before.0;
            let is_r = before == (true, false) && !here.0;
            let lower = (l as u64) < n;
            match (is_l, is_r, lower) {
                (true, _, true) => m.a += 1,
                (_, true, true) => m.b += 1,
                (true, _, false) => m.c += 1,
                (_, true, false) => m.d += 1,
                _ => {}
            }
        }
        KernelEval { good, matrix: m }
    }
}

/// Mask of `{n-1-a}` for `mask` over `0..n`.
#[inline]
pub fn reflect_mask(mask: u64, n: u32) -> u64 {
    mask.reverse_bits() >> (64 - n)
}

/// Digit list of `x` is lexicographically at most that of `y`.
#[inline]
pub fn lex_le(x: u64, y: u64) -> bool {
    let diff = x ^ y;
    diff == 0 || x >> diff.trailing_zeros() & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::DigitSet;
    use crate::sumset::SumsetProfile;
    use crate::typing::classify_intervals;
    use proptest::prelude::*;

    fn reference(n: u64, mask: u64) -> KernelEval {
        let set = DigitSet::from_mask(n, mask).unwrap();
        let p = SumsetProfile::new(&set);
        KernelEval {
            good: p.max_gap() <= 2,
            matrix: classify_intervals(&p).matrix(),
        }
    }

    #[test]
    fn eight_good_example() {
        let e = evaluate_mask(0b1010_0101, 8);
        assert!(e.good);
        assert_eq!(e.matrix, Matrix2::new(2, 1, 1, 2));
    }

    #[test]
    fn exhaustive_agreement_small_n() {
        for n in 3..=12u64 {
            for mid in 0..1u64 << (n - 2) {
                let mask = 1 | mid << 1 | 1 << (n - 1);
                let want = reference(n, mask);
                assert_eq!(evaluate_mask(mask, n as u32), want, "n={n} mask={mask:b}");
            }
        }
    }

    #[test]
    fn reflection_and_lex() {
        assert_eq!(reflect_mask(0b10011, 5), 0b11001);
        // {0,1,4} < {0,3,4}
        assert!(lex_le(0b10011, 0b11001));
        assert!(!lex_le(0b11001, 0b10011));
        assert!(lex_le(0b101, 0b101));
    }

    proptest! {
        #[test]
        fn word_kernel_matches_reference(n in 3u64..=32, mid in any::<u64>()) {
            let mid = mid & ((1u64 << (n - 2)) - 1);
            let mask = 1 | mid << 1 | 1 << (n - 1);
            prop_assert_eq!(evaluate_mask(mask, n as u32), reference(n, mask));
        }

        #[test]
        fn wide_kernel_matches_reference(n in 3u64..200, seed in any::<u64>(), density in 0.05f64..0.9) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut digits = vec![0, n - 1];
            digits.extend((1..n - 1).filter(|_| rng.gen_bool(density)));
            let set = DigitSet::new(n, digits.clone()).unwrap();
            let p = SumsetProfile::new(&set);
            let want = KernelEval { good: p.max_gap() <= 2, matrix: classify_intervals(&p).matrix() };
            prop_assert_eq!(WideMask::from_digits(n, &digits).evaluate(), want);
        }
    }
}
