//! Unscrambled 7-dimensional Sobol sequence with Joe–Kuo direction numbers,
//! in Gray-code (Antonov–Saleev) order.

const BITS: usize = 32;
pub const DIMENSION: usize = 7;

/// (degree s, coefficient a, initial m values) for dimensions 2..=7;
/// dimension 1 is the van der Corput sequence.
const PRIMITIVES: [(u32, u32, &[u32]); DIMENSION - 1] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
];

fn direction_numbers() -> [[u32; BITS]; DIMENSION] {
    let mut v = [[0u32; BITS]; DIMENSION];
    for (k, slot) in v[0].iter_mut().enumerate() {
        *slot = 1 << (BITS - 1 - k);
    }
    for (d, &(s, a, m)) in PRIMITIVES.iter().enumerate() {
        let s = s as usize;
        let dir = &mut v[d + 1];
        for k in 0..s {
            dir[k] = m[k] << (BITS - 1 - k);
        }
        for k in s..BITS {
            let mut x = dir[k - s] ^ (dir[k - s] >> s);
            for i in 1..s {
                if (a >> (s - 1 - i)) & 1 == 1 {
                    x ^= dir[k - i];
                }
            }
            dir[k] = x;
        }
    }
    v
}

/// Position in the sequence. `index` is the element returned by the next
/// call to [`sobol_next`]; it starts at 1 so the all-zero origin is skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SobolState {
    index: u64,
    directions: [[u32; BITS]; DIMENSION],
}

impl Default for SobolState {
    fn default() -> Self {
        Self::new()
    }
}

impl SobolState {
    pub fn new() -> Self {
        Self::at_index(1)
    }

    pub fn at_index(index: u64) -> Self {
        SobolState { index, directions: direction_numbers() }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn dimension(&self) -> usize {
        DIMENSION
    }

    /// Sequence element `index` without advancing.
    pub fn point(&self, index: u64) -> [f64; DIMENSION] {
        let gray = index ^ (index >> 1);
        let mut out = [0.0; DIMENSION];
        for (d, slot) in out.iter_mut().enumerate() {
            let mut x = 0u32;
            for bit in 0..BITS {
                if (gray >> bit) & 1 == 1 {
                    x ^= self.directions[d][bit];
                }
            }
            *slot = x as f64 / (1u64 << BITS) as f64;
        }
        out
    }
}

/// Returns the current element and advances the state.
pub fn sobol_next(state: &mut SobolState) -> [f64; DIMENSION] {
    let p = state.point(state.index);
    state.index += 1;
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_point_is_all_halves() {
        let mut s = SobolState::new();
        assert_eq!(sobol_next(&mut s), [0.5; 7]);
        assert_eq!(s.index(), 2);
    }

    #[test]
    fn gray_code_recursion_agrees_with_direct_evaluation() {
        // x_n = x_{n-1} ^ v[c], c = lowest zero bit of n-1.
        let v = direction_numbers();
        let state = SobolState::new();
        let mut x = [0u32; DIMENSION];
        for n in 1..600u64 {
            let c = (!(n - 1)).trailing_zeros() as usize;
            for d in 0..DIMENSION {
                x[d] ^= v[d][c];
            }
            let expected: Vec<f64> = x.iter().map(|&xi| xi as f64 / 4294967296.0).collect();
            assert_eq!(state.point(n).to_vec(), expected, "index {n}");
        }
    }

    #[test]
    fn equal_states_equal_outputs() {
        let mut a = SobolState::at_index(37);
        let mut b = SobolState::at_index(37);
        for _ in 0..10 {
            assert_eq!(sobol_next(&mut a), sobol_next(&mut b));
        }
    }
}
