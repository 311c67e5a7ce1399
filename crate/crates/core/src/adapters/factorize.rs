//! Factor-shape search: LoKr's `factorization` routine and the KronA divisor sweep.

/// Splits `dim` into `(m, n)` with `m <= n` and `m * n == dim` whenever a
/// split is found, following LyCORIS' LoKr `factorization`.
///
/// With `factor > 0` dividing `dim`, returns `(factor, dim / factor)` ordered.
/// Otherwise walks divisors upward from `(1, dim)`, accepting each step while
/// `m + n` stays within the bound fixed at the start (`1 + dim`) and `m` does
/// not exceed `factor` (a negative `factor` means "no cap", i.e. `dim`).
pub fn lokr_factorization(dim: usize, factor: i64) -> (usize, usize) {
    if factor > 0 && dim % factor as usize == 0 {
        let m = factor as usize;
        let n = dim / m;
        return if m > n { (n, m) } else { (m, n) };
    }
    let cap: i64 = if factor < 0 { dim as i64 } else { factor };
    let (mut m, mut n) = (1usize, dim);
    // set once; the walk never tightens it
    let length = m + n;
    while m < n {
        let mut new_m = m + 1;
        while dim % new_m != 0 {
            new_m += 1;
        }
        let new_n = dim / new_m;
        if new_m + new_n > length || new_m as i64 > cap {
            break;
        }
        m = new_m;
        n = new_n;
    }
    if m > n {
        (n, m)
    } else {
        (m, n)
    }
}

pub(crate) fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// KronA trainable-parameter count for a `d × h` layer: `a₁a₂ + (d/a₁)(h/a₂)`.
/// Callers must ensure `a₁ | d` and `a₂ | h`.
pub(crate) fn krona_count(d: usize, h: usize, a1: usize, a2: usize) -> usize {
    a1 * a2 + (d / a1) * (h / a2)
}

/// All `(a₁, a₂)` with `a₁ | d` and `a₂ | h`, ordered by KronA parameter count,
/// then `a₁`, then `a₂`.
pub fn enumerate_factor_pairs(d: usize, h: usize) -> Vec<(usize, usize)> {
    let d_divs = divisors(d);
    let h_divs = divisors(h);
    let mut pairs: Vec<(usize, usize)> = d_divs
        .iter()
        .flat_map(|&a1| h_divs.iter().map(move |&a2| (a1, a2)))
        .collect();
    pairs.sort_by_key(|&(a1, a2)| (krona_count(d, h, a1, a2), a1, a2));
    pairs
}
