//! Generator-matrix block codes over GF(2) and GF(p^m), the (16,12) example
//! code, and the orthogonal m-tuple decomposition of symbol sequences.

use crate::error::{Error, Result};
use crate::gf::{build_field, FieldElement, FieldSpec};
use rand::Rng;

/// A linear (N, K) block code. Entries of G and H are packed symbols of
/// `field` (plain 0/1 for binary codes).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearBlockCode {
    field: FieldSpec,
    k: usize,
    n: usize,
    g: Vec<Vec<u32>>,
    h: Option<Vec<Vec<u32>>>,
    systematic: bool,
}

impl LinearBlockCode {
    /// Code generated by the rows of `g`. A systematic G = [I | P] also
    /// gets its parity-check matrix H = [−Pᵀ | I].
    pub fn new(field: FieldSpec, g: Vec<Vec<u32>>) -> Result<Self> {
        let k = g.len();
        let n = g.first().map_or(0, Vec::len);
        if k == 0 || n < k || g.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("G must be K×N with N >= K >= 1, got {k}×{n}")));
        }
        let q = field.order().unwrap_or(u128::MAX);
        if g.iter().flatten().any(|&x| x as u128 >= q) {
            return Err(Error::InvalidArgument("G entry outside the field".into()));
        }
        if !field.has_tables() {
            return Err(Error::NoMultiplication { p: field.p(), m: field.m() });
        }
        let systematic = (0..k).all(|r| (0..k).all(|c| g[r][c] == u32::from(r == c)));
        let mut code = LinearBlockCode { field, k, n, g, h: None, systematic };
        if code.rank() != k {
            return Err(Error::Construction("generator rows are linearly dependent".into()));
        }
        if systematic {
            code.h = Some(code.systematic_parity_check());
        }
        Ok(code)
    }

    /// Attaches a parity-check matrix after checking G·Hᵀ = 0.
    pub fn with_parity_check(mut self, h: Vec<Vec<u32>>) -> Result<Self> {
        if h.iter().any(|r| r.len() != self.n) {
            return Err(Error::Dimension { expected: self.n, got: h.first().map_or(0, Vec::len) });
        }
        let f = &self.field;
        for grow in &self.g {
            for hrow in &h {
                let dot = grow
                    .iter()
                    .zip(hrow)
                    .fold(0, |acc, (&a, &b)| f.add_packed(acc, f.mul_packed(a, b)));
                if dot != 0 {
                    return Err(Error::Construction("G·Hᵀ is not zero".into()));
                }
            }
        }
        self.h = Some(h);
        Ok(self)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.g
    }

    pub fn parity_check(&self) -> Option<&[Vec<u32>]> {
        self.h.as_deref()
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    pub fn is_binary(&self) -> bool {
        self.field.p() == 2 && self.field.m() == 1
    }

    fn systematic_parity_check(&self) -> Vec<Vec<u32>> {
        let f = &self.field;
        (0..self.n - self.k)
            .map(|r| {
                let mut row = vec![0u32; self.n];
                for (i, cell) in row.iter_mut().take(self.k).enumerate() {
                    *cell = f.neg_packed(self.g[i][self.k + r]);
                }
                row[self.k + r] = 1;
                row
            })
            .collect()
    }

    /// Rank of G by Gaussian elimination over the code field.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.g.clone();
        let mut rank = 0;
        for c in 0..self.n {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, p);
            let inv = f.inv_packed(m[rank][c]);
            let pivot: Vec<u32> = m[rank].iter().map(|&x| f.mul_packed(x, inv)).collect();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let factor = f.neg_packed(row[c]);
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = f.add_packed(*x, f.mul_packed(factor, y));
                    }
                }
            }
            m[rank] = pivot;
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// v = u · G on packed symbols; zero message symbols are skipped.
    pub fn encode(&self, u: &[u32]) -> Result<Vec<u32>> {
        if u.len() != self.k {
            return Err(Error::Dimension { expected: self.k, got: u.len() });
        }
        let f = &self.field;
        let mut v = vec![0u32; self.n];
        for (&ui, row) in u.iter().zip(&self.g) {
            if ui == 0 {
                continue;
            }
            for (vn, &gn) in v.iter_mut().zip(row) {
                if gn != 0 {
                    *vn = f.add_packed(*vn, f.mul_packed(ui, gn));
                }
            }
        }
        Ok(v)
    }

    /// Encodes a message over the code field or over an extension GF(p^m)
    /// of a prime-field code (G entries then act as GF(p) scalars).
    pub fn encode_elements(&self, u: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if u.len() != self.k {
            return Err(Error::Dimension { expected: self.k, got: u.len() });
        }
        let msg_field = match u.first() {
            Some(e) => e.field().clone(),
            None => return Err(Error::Dimension { expected: self.k, got: 0 }),
        };
        if msg_field == self.field {
            let packed: Vec<u32> = u.iter().map(|e| self.field.pack(e.tuple())).collect();
            return self.encode(&packed)?.into_iter().map(|s| self.field.from_tuple(&self.field.unpack(s))).collect();
        }
        if self.field.m() != 1 || msg_field.p() != self.field.p() {
            return Err(Error::FieldMismatch);
        }
        let mut v = vec![msg_field.zero(); self.n];
        for (ui, row) in u.iter().zip(&self.g) {
            if ui.is_zero() {
                continue;
            }
            for (vn, &gn) in v.iter_mut().zip(row) {
                if gn != 0 {
                    *vn = msg_field.add(vn, &msg_field.scale(gn, ui)?)?;
                }
            }
        }
        Ok(v)
    }

    /// Syndrome H · vᵀ; `None` when no parity-check matrix is attached.
    pub fn syndrome(&self, v: &[u32]) -> Option<Vec<u32>> {
        let f = &self.field;
        let h = self.h.as_ref()?;
        Some(
            h.iter()
                .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add_packed(acc, f.mul_packed(a, b))))
                .collect(),
        )
    }

    /// G as dense text, one row per line, entries separated by spaces.
    pub fn generator_text(&self) -> String {
        self.g
            .iter()
            .map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }

    pub fn from_generator_text(field: FieldSpec, text: &str) -> Result<Self> {
        let g = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LinearBlockCode::new(field, g)
    }

    /// Random systematic code [I | P] with uniform P.
    pub fn random_systematic<R: Rng>(field: FieldSpec, k: usize, n: usize, rng: &mut R) -> Result<Self> {
        let q = field
            .order()
            .filter(|&q| q <= u32::MAX as u128)
            .ok_or(Error::FieldTooLarge { p: field.p(), m: field.m() })? as u32;
        let g = (0..k)
            .map(|r| {
                (0..n)
                    .map(|c| if c < k { u32::from(c == r) } else { rng.random_range(0..q) })
                    .collect()
            })
            .collect();
        LinearBlockCode::new(field, g)
    }
}

/// Parity nibbles of the rows of the (16,12) generator.
const EXAMPLE_PARITY: [[u32; 4]; 12] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [0, 0, 0, 1],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
];

/// The systematic binary (16,12) code of the worked GF(2^4) examples.
pub fn example_16x12_code() -> LinearBlockCode {
    let f2 = build_field(2, 1, None).expect("GF(2)");
    let g = (0..12)
        .map(|r| {
            let mut row = vec![0u32; 16];
            row[r] = 1;
            row[12..].copy_from_slice(&EXAMPLE_PARITY[r]);
            row
        })
        .collect();
    LinearBlockCode::new(f2, g).expect("example generator is valid")
}

/// Splits w over GF(p^m) into m sequences over GF(p): sequence j holds the
/// j-th tuple coordinate of every symbol.
pub fn decompose_sequence(w: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
    let ext = match w.first() {
        Some(e) => e.field().clone(),
        None => return Ok(Vec::new()),
    };
    if ext.m() == 1 {
        return Err(Error::InvalidArgument("decomposition needs an extension field".into()));
    }
    let prime = build_field(ext.p(), 1, None)?;
    (0..ext.m())
        .map(|j| w.iter().map(|e| prime.from_packed(e.tuple()[j] as u64)).collect())
        .collect()
}

/// ⊕_j u_j · α^j with every u_j over GF(p).
pub fn recompose(ext: &FieldSpec, parts: &[Vec<FieldElement>]) -> Result<Vec<FieldElement>> {
    if parts.len() != ext.m() {
        return Err(Error::Dimension { expected: ext.m(), got: parts.len() });
    }
    let len = parts[0].len();
    let mut out = vec![ext.zero(); len];
    for (j, part) in parts.iter().enumerate() {
        let basis = ext.basis(j);
        for (o, u) in out.iter_mut().zip(part) {
            *o = ext.add(o, &ext.scale(u.tuple()[0], &basis)?)?;
        }
    }
    Ok(out)
}

/// Checks encode(w) = ⊕_j encode(u_j) · α^j for the orthogonal
/// decomposition of w. The code must be over the prime subfield.
pub fn orthogonal_encode_check(w: &[FieldElement], code: &LinearBlockCode) -> Result<bool> {
    let ext = match w.first() {
        Some(e) => e.field().clone(),
        None => return Ok(true),
    };
    let direct = code.encode_elements(w)?;
    let parts = decompose_sequence(w)?;
    let mut layered = vec![ext.zero(); code.n()];
    for (j, part) in parts.iter().enumerate() {
        let vj = code.encode_elements(part)?;
        let basis = ext.basis(j);
        for (acc, v) in layered.iter_mut().zip(&vj) {
            *acc = ext.add(acc, &ext.scale(v.tuple()[0], &basis)?)?;
        }
    }
    Ok(direct == layered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn nibbles(bits: &[u32]) -> String {
        bits.chunks(4)
            .map(|c| c.iter().map(u32::to_string).collect::<String>())
            .collect::<Vec<_>>()
            .join(",")
    }

    #[test]
    fn example_generator() {
        let code = example_16x12_code();
        assert!(code.is_systematic());
        assert_eq!(code.rank(), 12);
        assert_eq!(&code.generator()[0][12..], &[1, 0, 0, 0]);
        for row in code.generator() {
            assert_eq!(code.syndrome(row).unwrap(), vec![0; 4]);
        }
    }

    #[test]
    fn example_codewords() {
        let code = example_16x12_code();
        let u1 = [1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0];
        assert_eq!(nibbles(&code.encode(&u1).unwrap()), "1000,1000,0000,1001");
        let u3 = [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0];
        assert!(nibbles(&code.encode(&u3).unwrap()).ends_with("1000"));
        assert_eq!(code.encode(&[0; 12]).unwrap(), vec![0; 16]);
    }

    #[test]
    fn example_decomposition() {
        let f16 = build_field(2, 4, None).unwrap();
        let w: Vec<FieldElement> = [[1, 1, 0, 0], [1, 0, 0, 0], [0, 1, 1, 0]]
            .iter()
            .map(|t| f16.from_tuple(t).unwrap())
            .collect();
        let parts = decompose_sequence(&w).unwrap();
        let as_bits: Vec<Vec<u32>> = parts.iter().map(|p| p.iter().map(|e| e.tuple()[0]).collect()).collect();
        assert_eq!(as_bits, vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(recompose(&f16, &parts).unwrap(), w);
        let zeros = vec![f16.zero(); 3];
        assert!(decompose_sequence(&zeros).unwrap().iter().flatten().all(|e| e.is_zero()));
        let f5 = build_field(5, 1, None).unwrap();
        assert!(decompose_sequence(&[f5.one()]).is_err());
    }

    #[test]
    fn orthogonal_identity_random_gf625() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f5 = build_field(5, 1, None).unwrap();
        let ext = build_field(5, 4, None).unwrap();
        let code = LinearBlockCode::random_systematic(f5, 5, 9, &mut rng).unwrap();
        for _ in 0..50 {
            let w: Vec<FieldElement> = (0..5).map(|_| ext.from_packed(rng.random_range(0..625)).unwrap()).collect();
            assert!(orthogonal_encode_check(&w, &code).unwrap());
        }
    }

    #[test]
    fn generator_text_round_trip() {
        let code = example_16x12_code();
        let back = LinearBlockCode::from_generator_text(code.field().clone(), &code.generator_text()).unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn nonbinary_code_parity_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = build_field(2, 4, None).unwrap();
        let code = LinearBlockCode::random_systematic(f, 4, 7, &mut rng).unwrap();
        let u = [3, 0, 9, 15];
        let v = code.encode(&u).unwrap();
        assert_eq!(&v[..4], &u);
        assert!(code.syndrome(&v).unwrap().iter().all(|&s| s == 0));
    }
}
