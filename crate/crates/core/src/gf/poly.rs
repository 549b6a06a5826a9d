//! Polynomials over GF(p) used to build extension fields: primitivity testing
//! by multiplicative order and the lexicographically smallest primitive
//! polynomial search.

/// Trial division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiply two residues modulo the monic polynomial `g` (coefficients g_0..g_m).
fn mul_mod(a: &[u32], b: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let m = g.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    // X^m = -(g_0 + ... + g_{m-1} X^{m-1})
    for d in (m..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (k, &gk) in g[..m].iter().enumerate() {
            let sub = c * gk as u64 % p64;
            let idx = d - m + k;
            prod[idx] = (prod[idx] + p64 - sub) % p64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|c| c as u32).collect()
}

/// X^e mod g.
fn x_pow_mod(e: u128, g: &[u32], p: u32) -> Vec<u32> {
    let m = g.len() - 1;
    let mut result = vec![0u32; m];
    result[0] = 1;
    let mut base = vec![0u32; m];
    if m == 1 {
        // X mod (X + g_0) = -g_0
        base[0] = (p - g[0] % p) % p;
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, g, p);
        }
        base = mul_mod(&base, &base, g, p);
        e >>= 1;
    }
    result
}

fn is_one(v: &[u32]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

/// True when X has multiplicative order exactly p^m - 1 modulo `g`, which
/// forces `g` to be irreducible and primitive.
pub fn is_primitive(g: &[u32], p: u32) -> bool {
    let m = g.len() - 1;
    if m == 0 || g[m] != 1 || g[0].is_multiple_of(p) {
        return false;
    }
    let Some(q) = (p as u128).checked_pow(m as u32) else {
        return false;
    };
    let order = q - 1;
    if !is_one(&x_pow_mod(order, g, p)) {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| !is_one(&x_pow_mod(order / r, g, p)))
}

/// Smallest primitive monic polynomial of degree `m`, ordering candidates by
/// the integer g_0 + g_1 p + ... + g_{m-1} p^{m-1}.
pub fn search_primitive(p: u32, m: usize) -> Option<Vec<u32>> {
    let span = (p as u128).checked_pow(m as u32)?;
    let mut g = vec![0u32; m + 1];
    g[m] = 1;
    for code in 1..span {
        let mut c = code;
        for coeff in g.iter_mut().take(m) {
            *coeff = (c % p as u128) as u32;
            c /= p as u128;
        }
        if g[0] == 0 {
            continue;
        }
        if is_primitive(&g, p) {
            return Some(g);
        }
    }
    None
}

/// Pinned primitive polynomials (g_0..g_m) for p in {2, 5, 17}, 2 <= m <= 16.
/// Each entry is the result of [`search_primitive`].
pub fn default_primitive(p: u32, m: usize) -> Option<&'static [u32]> {
    let table: &[(u32, usize, &[u32])] = DEFAULT_POLYS;
    table
        .iter()
        .find(|(tp, tm, _)| *tp == p && *tm == m)
        .map(|(_, _, g)| *g)
}

include!("default_polys.rs");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2));
        assert!(is_prime(17));
        assert!(!is_prime(1));
        assert!(!is_prime(15));
        assert!(is_prime(65537));
    }

    #[test]
    fn factors_of_group_orders() {
        assert_eq!(prime_factors(15), vec![3, 5]);
        assert_eq!(prime_factors(624), vec![2, 3, 13]);
        assert_eq!(prime_factors(255), vec![3, 5, 17]);
    }

    #[test]
    fn x4_x_1_is_primitive() {
        assert!(is_primitive(&[1, 1, 0, 0, 1], 2));
        // X^4 + X^3 + X^2 + X + 1 is irreducible with order 5
        assert!(!is_primitive(&[1, 1, 1, 1, 1], 2));
        assert_eq!(search_primitive(2, 4).unwrap(), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn gf256_default_matches_standard_polynomial() {
        // X^8 + X^4 + X^3 + X^2 + 1
        assert_eq!(
            default_primitive(2, 8).unwrap(),
            &[1, 0, 1, 1, 1, 0, 0, 0, 1]
        );
    }

    #[test]
    fn default_table_equals_search() {
        for &(p, m, g) in DEFAULT_POLYS {
            assert!(is_primitive(g, p), "p={p} m={m}");
            if (p as u128).pow(m as u32) <= 1 << 24 {
                assert_eq!(search_primitive(p, m).unwrap(), g, "p={p} m={m}");
            }
        }
    }
}
