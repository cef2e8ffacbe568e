use rand::Rng as _;

use crate::rng::Rng;

/// Draws from Poisson(`lambda`) by sequential inversion of the CDF.
pub fn poisson(lambda: f64, rng: &mut Rng) -> u32 {
    let u: f64 = rng.random();
    let mut k = 0u32;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= lambda / k as f64;
        cdf += p;
        if p == 0.0 && cdf < u {
            // Tail lost to underflow.
            break;
        }
    }
    k
}
