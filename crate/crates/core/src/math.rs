//! Float intrinsics that work under `no_std`, exact summation, and seed
//! derivation helpers.

/// Natural exponential.
#[inline]
pub fn exp(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.exp()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::exp(x)
    }
}

/// Base-10 logarithm.
#[inline]
pub fn log10(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.log10()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log10(x)
    }
}

/// `base` raised to `exponent`.
#[inline]
pub fn powf(base: f64, exponent: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        base.powf(exponent)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(base, exponent)
    }
}

/// Square root.
#[inline]
pub fn sqrt(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sqrt()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sqrt(x)
    }
}

/// Sine (radians).
#[inline]
pub fn sin(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sin()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sin(x)
    }
}

/// Arctangent (radians).
#[inline]
pub fn atan(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.atan()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::atan(x)
    }
}

/// Absolute value.
#[inline]
pub fn abs(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.abs()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::fabs(x)
    }
}

/// Error-free transformation: returns `(s, e)` with `s = fl(a + b)` and
/// `a + b = s + e` exactly (Knuth two-sum).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Exact sum of a slice of finite `f64` terms, correctly rounded.
///
/// Maintains a Shewchuk-style expansion of non-overlapping partials, so the
/// result is the `f64` nearest to the exact real sum. Two inputs that are
/// permutations of the same multiset produce bit-identical results, and the
/// final rounding is monotone in the exact sum. Both properties are load
/// bearing for the solver's cross-strategy objective comparisons.
pub fn exact_sum(terms: &[f64]) -> f64 {
    let mut partials: alloc::vec::Vec<f64> = alloc::vec::Vec::new();
    for &term in terms {
        let mut x = term;
        let mut used = 0;
        for i in 0..partials.len() {
            let (s, e) = two_sum(x, partials[i]);
            if e != 0.0 {
                partials[used] = e;
                used += 1;
            }
            x = s;
        }
        partials.truncate(used);
        partials.push(x);
    }
    // Partials are ordered by increasing magnitude; summing in that order
    // loses at most one final rounding.
    let mut total = 0.0;
    for &p in &partials {
        total += p;
    }
    total
}

/// One round of the splitmix64 output permutation.
#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a stream seed from a master seed and up to two coordinates
/// (seed index, time step). Streams for distinct coordinates are
/// decorrelated; the mapping is fixed so runs are reproducible.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    state ^= a.wrapping_mul(0xD1B5_4A32_D192_ED03);
    out ^= splitmix64(&mut state);
    state ^= b.wrapping_mul(0x8CB9_2BA7_2F3D_8DD7);
    out ^ splitmix64(&mut state)
}
