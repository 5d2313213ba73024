//! Iterative radix-2 complex FFT and its tensor-product extension to n-D
//! arrays stored with axis 0 slowest.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

/// Precomputed twiddles and bit reversal for one power-of-two length.
pub struct FftPlan {
    len: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl FftPlan {
    pub fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "FFT length must be a power of two");
        let bits = len.trailing_zeros();
        let twiddles = (0..len / 2)
            .map(|k| {
                let a = -2.0 * core::f64::consts::PI * k as f64 / len as f64;
                Complex64::new(a.cos(), a.sin())
            })
            .collect();
        let bitrev = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Self { len, twiddles, bitrev }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized transform: forward uses e^{−2πi km/N}, inverse e^{+2πi km/N}.
    pub fn process(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.len;
        debug_assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if j > i {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// In-place unnormalized n-D transform of an N^dim array.
pub fn fft_nd(data: &mut [Complex64], dim: usize, size: usize, inverse: bool) {
    let plan = FftPlan::new(size);
    let total = data.len();
    debug_assert_eq!(total, size.pow(dim as u32));
    let mut line = Vec::with_capacity(size);
    for axis in 0..dim {
        let stride = size.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            for chunk in data.chunks_exact_mut(size) {
                plan.process(chunk, inverse);
            }
            continue;
        }
        let block = stride * size;
        for base in (0..total).step_by(block) {
            for offset in 0..stride {
                line.clear();
                line.extend((0..size).map(|k| data[base + offset + k * stride]));
                plan.process(&mut line, inverse);
                for (k, v) in line.iter().enumerate() {
                    data[base + offset + k * stride] = *v;
                }
            }
        }
    }
}
