//! Reference computations written independently of the library, used as
//! oracles by the integration suites.
#![allow(dead_code)]

/// Schoolbook product of two tuples (lowest degree first) modulo a monic
/// g(X) = g_0 + … + g_m X^m over GF(p).
pub fn naive_mul(p: u32, g: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let m = g.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    // reduce from the top: X^m = −(g_0 + … + g_{m−1} X^{m−1})
    for d in (m..2 * m).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for i in 0..m {
            let sub = c * g[i] as u64 % p as u64;
            prod[d - m + i] = (prod[d - m + i] + p as u64 - sub) % p as u64;
        }
    }
    prod[..m].iter().map(|&x| x as u32).collect()
}

/// C(n, k) as f64 by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Gaussian tail Q(x) by composite Simpson integration of the density
/// over [x, x + 12].
pub fn q_function(x: f64) -> f64 {
    let steps = 200_000;
    let h = 12.0 / steps as f64;
    let pdf = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(x) + pdf(x + 12.0);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * pdf(x + i as f64 * h);
    }
    s * h / 3.0
}

/// All sign patterns ±j_1 ± … ± j_J mod p (bit 1 = minus) are distinct and
/// nonzero.
pub fn brute_uspm(p: u32, js: &[u32]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for mask in 0u32..1 << js.len() {
        let s = js.iter().enumerate().fold(0u32, |acc, (i, &j)| {
            let term = if mask >> i & 1 == 1 { p - j } else { j };
            (acc + term) % p
        });
        if s == 0 || !seen.insert(s) {
            return false;
        }
    }
    true
}

/// u·G over GF(2) from dense rows.
pub fn dense_encode(g: &[Vec<u8>], u: &[u8]) -> Vec<u8> {
    let n = g[0].len();
    let mut out = vec![0u8; n];
    for (row, &b) in g.iter().zip(u) {
        if b == 1 {
            for (o, &x) in out.iter_mut().zip(row) {
                *o ^= x;
            }
        }
    }
    out
}

/// Two-sided binomial significance: a < b with `z` standard errors.
pub fn significantly_lower(err_a: u64, bits_a: u64, err_b: u64, bits_b: u64, z: f64) -> bool {
    let pa = err_a as f64 / bits_a as f64;
    let pb = err_b as f64 / bits_b as f64;
    let var = pa * (1.0 - pa) / bits_a as f64 + pb * (1.0 - pb) / bits_b as f64;
    pb - pa > z * var.sqrt()
}
