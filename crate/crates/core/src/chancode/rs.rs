//! Reed–Solomon (255, 205) over GF(2^8) with X^8 + X^4 + X^3 + X^2 + 1,
//! roots α^1 … α^50. Hard-decision decoding by syndromes, Berlekamp–Massey,
//! Chien search and Forney.
//!
//! Codewords are [message | parity]; byte i is the coefficient of
//! x^{254 − i}.

use crate::error::{Error, Result};
use crate::gf::{build_field, FieldSpec};

pub const RS_N: usize = 255;
pub const RS_K: usize = 205;
/// Guaranteed correction radius floor((N − K) / 2).
pub const RS_T: usize = (RS_N - RS_K) / 2;

/// Field polynomial coefficients g_0..g_8 (0x11d).
const RS_POLY: [u32; 9] = [1, 0, 1, 1, 1, 0, 0, 0, 1];

#[derive(Clone, Debug)]
pub struct ReedSolomon {
    field: FieldSpec,
    n: usize,
    k: usize,
    /// Generator polynomial, highest degree first, monic.
    generator: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsDecoded {
    pub message: Vec<u8>,
    /// Symbols changed by the decoder.
    pub corrected: usize,
    /// The word was found uncorrectable; `message` is the received prefix.
    pub failed: bool,
}

impl Default for ReedSolomon {
    fn default() -> Self {
        Self::new()
    }
}

impl ReedSolomon {
    pub fn new() -> Self {
        let field = build_field(2, 8, Some(&RS_POLY)).expect("0x11d is primitive");
        let nroots = RS_N - RS_K;
        let mut generator = vec![1u32];
        for i in 1..=nroots {
            // multiply by (x + α^i)
            let root = field.exp_packed(i);
            let mut next = vec![0u32; generator.len() + 1];
            for (d, &c) in generator.iter().enumerate() {
                next[d] ^= c;
                next[d + 1] ^= field.mul_packed(c, root);
            }
            generator = next;
        }
        ReedSolomon { field, n: RS_N, k: RS_K, generator }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn nroots(&self) -> usize {
        self.n - self.k
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k {
            return Err(Error::Dimension { expected: self.k, got: msg.len() });
        }
        let f = &self.field;
        let nr = self.nroots();
        // remainder of msg(x) · x^{nr} by the generator, LFSR form
        let mut rem = vec![0u32; nr];
        for &b in msg {
            let feedback = b as u32 ^ rem[0];
            rem.rotate_left(1);
            rem[nr - 1] = 0;
            if feedback != 0 {
                for (r, &g) in rem.iter_mut().zip(&self.generator[1..]) {
                    *r ^= f.mul_packed(feedback, g);
                }
            }
        }
        let mut out = msg.to_vec();
        out.extend(rem.iter().map(|&x| x as u8));
        Ok(out)
    }

    /// S_j = c(α^j) for j = 1..=N−K.
    pub fn syndromes(&self, word: &[u8]) -> Vec<u32> {
        let f = &self.field;
        (1..=self.nroots())
            .map(|j| {
                let x = f.exp_packed(j);
                word.iter().fold(0u32, |acc, &c| f.mul_packed(acc, x) ^ c as u32)
            })
            .collect()
    }

    pub fn decode(&self, word: &[u8]) -> Result<RsDecoded> {
        if word.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: word.len() });
        }
        let f = &self.field;
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(RsDecoded { message: word[..self.k].to_vec(), corrected: 0, failed: false });
        }
        let failure = || RsDecoded { message: word[..self.k].to_vec(), corrected: 0, failed: true };

        // Berlekamp–Massey; lambda lowest degree first
        let mut lambda = vec![1u32];
        let mut prev = vec![1u32];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut b = 1u32;
        for r in 0..synd.len() {
            let mut delta = synd[r];
            for i in 1..=l.min(lambda.len() - 1) {
                delta ^= f.mul_packed(lambda[i], synd[r - i]);
            }
            if delta == 0 {
                shift += 1;
                continue;
            }
            let coef = f.mul_packed(delta, f.inv_packed(b));
            let mut next = lambda.clone();
            if next.len() < prev.len() + shift {
                next.resize(prev.len() + shift, 0);
            }
            for (i, &pc) in prev.iter().enumerate() {
                next[i + shift] ^= f.mul_packed(coef, pc);
            }
            if 2 * l <= r {
                prev = lambda;
                l = r + 1 - l;
                b = delta;
                shift = 1;
            } else {
                shift += 1;
            }
            lambda = next;
        }
        while lambda.len() > 1 && *lambda.last().expect("nonempty") == 0 {
            lambda.pop();
        }
        let degree = lambda.len() - 1;
        if degree != l || degree > self.nroots() / 2 {
            return Ok(failure());
        }

        // Chien search over the positions of the word.
        let q1 = 255usize;
        let mut errors = Vec::with_capacity(degree);
        for pos in 0..self.n {
            let power = self.n - 1 - pos;
            let x_inv = f.exp_packed((q1 - power % q1) % q1);
            if poly_eval(f, &lambda, x_inv) == 0 {
                errors.push((pos, power));
            }
        }
        if errors.len() != degree {
            return Ok(failure());
        }

        // Ω(x) = S(x) Λ(x) mod x^{2t}
        let nr = self.nroots();
        let mut omega = vec![0u32; nr];
        for (i, &s) in synd.iter().enumerate() {
            for (j, &lc) in lambda.iter().enumerate() {
                if i + j < nr {
                    omega[i + j] ^= f.mul_packed(s, lc);
                }
            }
        }
        // formal derivative: odd-degree terms survive in characteristic 2
        let deriv: Vec<u32> = (1..lambda.len()).map(|i| if i % 2 == 1 { lambda[i] } else { 0 }).collect();

        let mut fixed = word.to_vec();
        for &(pos, power) in &errors {
            let x_inv = f.exp_packed((q1 - power % q1) % q1);
            let num = poly_eval(f, &omega, x_inv);
            let den = poly_eval(f, &deriv, x_inv);
            if den == 0 {
                return Ok(failure());
            }
            // first root α^1 makes the X^{1−b} factor vanish
            fixed[pos] ^= f.mul_packed(num, f.inv_packed(den)) as u8;
        }
        if self.syndromes(&fixed).iter().any(|&s| s != 0) {
            return Ok(failure());
        }
        Ok(RsDecoded { message: fixed[..self.k].to_vec(), corrected: errors.len(), failed: false })
    }
}

fn poly_eval(f: &FieldSpec, coeffs: &[u32], x: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| f.mul_packed(acc, x) ^ c)
}

/// Binary expansion: bit i of byte n sits at position 8n + i.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    bytes.iter().flat_map(|&b| (0..8).map(move |i| (b >> i) & 1)).collect()
}

pub fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b & 1) << i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn corrupt(word: &mut [u8], count: usize, rng: &mut ChaCha8Rng) {
        for pos in sample(rng, word.len(), count) {
            word[pos] ^= rng.random_range(1..=255u8);
        }
    }

    #[test]
    fn zero_message() {
        let rs = ReedSolomon::new();
        assert_eq!(rs.encode(&[0; RS_K]).unwrap(), vec![0; RS_N]);
    }

    #[test]
    fn codewords_have_zero_syndrome() {
        let rs = ReedSolomon::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let msg: Vec<u8> = (0..RS_K).map(|_| rng.random()).collect();
        let cw = rs.encode(&msg).unwrap();
        assert_eq!(&cw[..RS_K], &msg[..]);
        assert!(rs.syndromes(&cw).iter().all(|&s| s == 0));
    }

    #[test]
    fn corrects_up_to_t() {
        let rs = ReedSolomon::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for count in [1, 2, 13, 24, 25] {
            for _ in 0..20 {
                let msg: Vec<u8> = (0..RS_K).map(|_| rng.random()).collect();
                let mut word = rs.encode(&msg).unwrap();
                corrupt(&mut word, count, &mut rng);
                let out = rs.decode(&word).unwrap();
                assert!(!out.failed, "{count} errors");
                assert_eq!(out.message, msg);
                assert_eq!(out.corrected, count);
            }
        }
    }

    #[test]
    fn beyond_t_is_flagged_or_miscorrected() {
        let rs = ReedSolomon::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let msg: Vec<u8> = (0..RS_K).map(|_| rng.random()).collect();
            let mut word = rs.encode(&msg).unwrap();
            corrupt(&mut word, 26, &mut rng);
            let out = rs.decode(&word).unwrap();
            assert!(out.failed || out.message != msg);
        }
    }

    #[test]
    fn bit_expansion_round_trip() {
        let bytes = vec![0x01, 0x80, 0xa5];
        let bits = bytes_to_bits(&bytes);
        assert_eq!(&bits[..8], &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(bits_to_bytes(&bits), bytes);
    }
}
