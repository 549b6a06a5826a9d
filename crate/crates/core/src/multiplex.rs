//! Bit/symbol transforms, finite-field multiplex matrices (FFMM), FFSP
//! computation and table inversion, C-UDC construction and loading factors.

use crate::ep_code::{
    all_ones, ffsp_digits, pattern_bits, verify_uspm, CodeKind, ElementPair, EpCode, UspmReport,
    ENUMERATION_GUARD,
};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use std::collections::HashMap;
use std::sync::OnceLock;

/// F_B2q: bit 0 → e0, bit 1 → e1.
pub fn f_b2q(bit: u8, pair: &ElementPair) -> FieldElement {
    pair.element(bit).clone()
}

/// F_q2B, the left inverse of [`f_b2q`].
pub fn f_q2b(elem: &FieldElement, pair: &ElementPair) -> Result<u8> {
    if elem == pair.e0() {
        Ok(0)
    } else if elem == pair.e1() {
        Ok(1)
    } else {
        Err(Error::NotInPair)
    }
}

type InversionTable = HashMap<Vec<u32>, u64>;

/// A J×T binary matrix A_M bound to the EP code whose pairs it combines.
#[derive(Debug)]
pub struct MultiplexMatrix {
    a: Vec<Vec<u8>>,
    code: EpCode,
    table: OnceLock<Option<InversionTable>>,
}

impl Clone for MultiplexMatrix {
    fn clone(&self) -> Self {
        MultiplexMatrix { a: self.a.clone(), code: self.code.clone(), table: OnceLock::new() }
    }
}

impl MultiplexMatrix {
    pub fn new(code: EpCode, a: Vec<Vec<u8>>) -> Result<Self> {
        if a.len() != code.len() {
            return Err(Error::Dimension { expected: code.len(), got: a.len() });
        }
        let t = a.first().map_or(0, Vec::len);
        if t == 0 || t > code.len() || a.iter().any(|row| row.len() != t) {
            return Err(Error::InvalidArgument(format!("A_M must be J×T with 1 <= T <= J, got T = {t}")));
        }
        if a.iter().flatten().any(|&x| x > 1) {
            return Err(Error::InvalidArgument("A_M entries must be binary".into()));
        }
        Ok(MultiplexMatrix { a, code, table: OnceLock::new() })
    }

    /// The single all-ones column: plain finite-field addition.
    pub fn all_ones(code: EpCode) -> Self {
        let a = all_ones(code.len());
        MultiplexMatrix { a, code, table: OnceLock::new() }
    }

    pub fn code(&self) -> &EpCode {
        &self.code
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.a
    }

    pub fn users(&self) -> usize {
        self.a.len()
    }

    pub fn columns(&self) -> usize {
        self.a[0].len()
    }

    pub fn field(&self) -> &FieldSpec {
        self.code.field()
    }

    pub fn verify(&self) -> Result<UspmReport> {
        verify_uspm(&self.code, &self.a)
    }

    /// w_t = ⊕_j a_{j,t} u_j for an arbitrary symbol block.
    pub fn ffsp(&self, block: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if block.len() != self.users() {
            return Err(Error::Dimension { expected: self.users(), got: block.len() });
        }
        let f = self.field();
        let mut w = vec![f.zero(); self.columns()];
        for (u, row) in block.iter().zip(&self.a) {
            for (wt, &sel) in w.iter_mut().zip(row) {
                if sel == 1 {
                    *wt = f.add(wt, u)?;
                }
            }
        }
        Ok(w)
    }

    /// FFSP of the users' bits after F_B2q with each user's pair.
    pub fn ffsp_bits(&self, bits: &[u8]) -> Result<Vec<FieldElement>> {
        if bits.len() != self.users() {
            return Err(Error::Dimension { expected: self.users(), got: bits.len() });
        }
        let digits = ffsp_digits(&self.code, &self.a, bits);
        self.digits_to_elements(&digits)
    }

    fn digits_to_elements(&self, digits: &[u32]) -> Result<Vec<FieldElement>> {
        let m = self.field().m();
        digits.chunks(m).map(|c| self.field().from_tuple(c)).collect()
    }

    fn table(&self) -> Result<&InversionTable> {
        if self.users() > ENUMERATION_GUARD {
            return Err(Error::EnumerationGuard(self.users()));
        }
        self.table
            .get_or_init(|| {
                let mut map = HashMap::with_capacity(1 << self.users().min(20));
                for idx in 0..1u64 << self.users() {
                    let bits = pattern_bits(idx, self.users());
                    if map.insert(ffsp_digits(&self.code, &self.a, &bits), idx).is_some() {
                        return None;
                    }
                }
                Some(map)
            })
            .as_ref()
            .ok_or_else(|| Error::Construction("multiplexer is not USPM; no inversion table".into()))
    }

    /// The unique bit pattern (user 1 first) whose FFSP equals `w`.
    pub fn demux_bits(&self, w: &[FieldElement]) -> Result<Vec<u8>> {
        if w.len() != self.columns() {
            return Err(Error::Dimension { expected: self.columns(), got: w.len() });
        }
        let key: Vec<u32> = w.iter().flat_map(|e| e.tuple().iter().copied()).collect();
        let idx = *self.table()?.get(&key).ok_or(Error::UnreachableFfsp)?;
        Ok(pattern_bits(idx, self.users()))
    }

    /// The unique symbol block whose FFSP equals `w`.
    pub fn demux_lookup(&self, w: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let bits = self.demux_bits(w)?;
        Ok(bits.iter().zip(self.code.pairs()).map(|(&b, pr)| f_b2q(b, pr)).collect())
    }

    /// All 2^J table rows (FFSP vector, bit pattern) in pattern order.
    pub fn table_rows(&self) -> Result<Vec<(Vec<FieldElement>, Vec<u8>)>> {
        if self.users() > ENUMERATION_GUARD {
            return Err(Error::EnumerationGuard(self.users()));
        }
        (0..1u64 << self.users())
            .map(|idx| {
                let bits = pattern_bits(idx, self.users());
                Ok((self.ffsp_bits(&bits)?, bits))
            })
            .collect()
    }

    /// CSV `w, u_1, …, u_J`: FFSP components joined by `;` when T > 1.
    pub fn table_csv(&self) -> Result<String> {
        let mut out = String::from("w");
        for j in 1..=self.users() {
            out.push_str(&format!(",u_{j}"));
        }
        out.push('\n');
        for (w, bits) in self.table_rows()? {
            let ws: Vec<String> = w.iter().map(|e| e.to_string()).collect();
            out.push_str(&ws.join(";"));
            for (b, pair) in bits.iter().zip(self.code.pairs()) {
                out.push_str(&format!(",{}", pair.element(*b)));
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// A_M serialized as T rows of J bits.
    pub fn to_text(&self) -> String {
        (0..self.columns())
            .map(|t| self.a.iter().map(|row| char::from(b'0' + row[t])).collect::<String>() + "\n")
            .collect()
    }
}

/// C-UDC: route disjoint user groups into disjoint UD-AIEP codes of Ξ.
///
/// The AIEPs of the first ceil(J / |Ξ(1)|) codes are pooled in ascending
/// order; user j takes the j-th of them and is wired to the column of the
/// code containing it. Columns left without users are dropped.
pub fn build_cudc_matrix(field: &FieldSpec, xi: &[EpCode], users: usize) -> Result<MultiplexMatrix> {
    let capacity: usize = xi.iter().map(EpCode::len).sum();
    if users == 0 || users > capacity {
        return Err(Error::TooManyUsers { users, bound: capacity });
    }
    let mut needed = 0;
    let mut covered = 0;
    while covered < users {
        covered += xi[needed].len();
        needed += 1;
    }
    let mut pool: Vec<(u32, usize, ElementPair)> = Vec::new();
    for (t, code) in xi[..needed].iter().enumerate() {
        for pair in code.pairs() {
            let idx = pair
                .aiep_index()
                .ok_or_else(|| Error::InvalidArgument("C-UDC needs prime-field AIEP codes".into()))?;
            pool.push((idx, t, pair.clone()));
        }
    }
    pool.sort_by_key(|(idx, _, _)| *idx);
    pool.truncate(users);

    let mut used_cols: Vec<usize> = pool.iter().map(|(_, t, _)| *t).collect();
    used_cols.sort_unstable();
    used_cols.dedup();
    let a: Vec<Vec<u8>> = pool
        .iter()
        .map(|(_, t, _)| used_cols.iter().map(|c| u8::from(c == t)).collect())
        .collect();
    let pairs = pool.into_iter().map(|(_, _, pr)| pr).collect();
    let code = EpCode::new(field.clone(), pairs, CodeKind::PrimeAiep)?;
    let mux = MultiplexMatrix::new(code, a)?;
    let report = mux.verify()?;
    if !report.is_certified(CodeKind::PrimeAiep, field.p()) {
        return Err(Error::Construction("C-UDC matrix failed the USPM check".into()));
    }
    Ok(mux)
}

/// Served users per occupied resource.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoadingFactor {
    pub users: usize,
    pub columns: usize,
    /// Tuple width the extension-field figure divides by (1 for prime fields).
    pub width: usize,
}

impl LoadingFactor {
    /// Raw R_q = J / T.
    pub fn raw(&self) -> f64 {
        self.users as f64 / self.columns as f64
    }

    /// J / (T · m): users per GF(p) dimension, the figure used for Ψ_B.
    pub fn per_dimension(&self) -> f64 {
        self.users as f64 / (self.columns * self.width) as f64
    }
}

pub fn loading_factor(mux: &MultiplexMatrix) -> LoadingFactor {
    LoadingFactor { users: mux.users(), columns: mux.columns(), width: mux.field().m() }
}

/// G_M^1 of Ψ_B: the m basis elements α^0 … α^{m−1} of GF(2^m).
#[derive(Clone, Debug)]
pub struct FfmcGenerator {
    field: FieldSpec,
}

impl FfmcGenerator {
    pub fn new(field: FieldSpec) -> Result<Self> {
        if field.p() != 2 {
            return Err(Error::InvalidArgument("FFMC generator is defined over GF(2^m)".into()));
        }
        Ok(FfmcGenerator { field })
    }

    pub fn rows(&self) -> Vec<FieldElement> {
        (0..self.field.m()).map(|i| self.field.basis(i)).collect()
    }

    /// w = b · G_M^1; the identity generator returns the bits as the tuple.
    pub fn encode(&self, bits: &[u8]) -> Result<FieldElement> {
        if bits.len() != self.field.m() {
            return Err(Error::Dimension { expected: self.field.m(), got: bits.len() });
        }
        let mut w = self.field.zero();
        for (row, &b) in self.rows().iter().zip(bits) {
            if b == 1 {
                w = self.field.add(&w, row)?;
            }
        }
        Ok(w)
    }
}

/// Convenience form of [`FfmcGenerator::encode`].
pub fn ffmc_encode(field: &FieldSpec, bits: &[u8]) -> Result<FieldElement> {
    FfmcGenerator::new(field.clone())?.encode(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ep_code::{build_psi_b, build_ud_aiep, enumerate_ud_codes};
    use crate::gf::build_field;

    fn gf(p: u32) -> FieldSpec {
        build_field(p, 1, None).unwrap()
    }

    fn el(f: &FieldSpec, v: u64) -> FieldElement {
        f.from_packed(v).unwrap()
    }

    #[test]
    fn switching_functions() {
        let f5 = gf(5);
        let c1 = ElementPair::aiep(&f5, 1).unwrap();
        assert_eq!(f_b2q(1, &c1), el(&f5, 4));
        assert_eq!(f_b2q(0, &ElementPair::base(&f5)), f5.zero());
        let psi = build_psi_b(4).unwrap();
        assert_eq!(f_b2q(1, &psi.pairs()[1]).tuple(), &[0, 1, 0, 0]);
        assert_eq!(f_q2b(&el(&f5, 4), &c1).unwrap(), 1);
        assert_eq!(f_q2b(c1.e0(), &c1).unwrap(), 0);
        assert_eq!(f_q2b(&el(&f5, 2), &c1).unwrap_err(), Error::NotInPair);
    }

    #[test]
    fn gf5_ffsp_and_lookup() {
        let f5 = gf(5);
        let mux = MultiplexMatrix::all_ones(build_ud_aiep(&f5, 2).unwrap());
        assert_eq!(mux.ffsp(&[el(&f5, 1), el(&f5, 2)]).unwrap(), vec![el(&f5, 3)]);
        assert_eq!(mux.demux_lookup(&[el(&f5, 3)]).unwrap(), vec![el(&f5, 1), el(&f5, 2)]);
        assert_eq!(mux.demux_lookup(&[f5.zero()]).unwrap_err(), Error::UnreachableFfsp);
    }

    #[test]
    fn example_four_matrix() {
        let f17 = gf(17);
        let xi = enumerate_ud_codes(&f17).unwrap();
        let mux = build_cudc_matrix(&f17, &xi, 8).unwrap();
        assert_eq!(mux.to_text(), "11010001\n00101110\n");
        let u: Vec<FieldElement> = (1..=8).map(|v| el(&f17, v)).collect();
        let w = mux.ffsp(&u).unwrap();
        assert_eq!(w, vec![el(&f17, 15), el(&f17, 4)]);
        assert_eq!(mux.demux_lookup(&w).unwrap(), u);
        assert_eq!(loading_factor(&mux).raw(), 4.0);
    }

    #[test]
    fn cudc_small_cases() {
        let f17 = gf(17);
        let xi = enumerate_ud_codes(&f17).unwrap();
        let single = build_cudc_matrix(&f17, &xi, 4).unwrap();
        assert_eq!(single.columns(), 1);
        assert!(build_cudc_matrix(&f17, &xi, 9).is_err());

        let f13 = gf(13);
        let xi13 = enumerate_ud_codes(&f13).unwrap();
        let mux = build_cudc_matrix(&f13, &xi13, 4).unwrap();
        assert_eq!(mux.columns(), 2);
        assert!(mux.verify().unwrap().distinct);
    }

    #[test]
    fn loading_factors() {
        let psi = build_psi_b(4).unwrap();
        let lf = loading_factor(&MultiplexMatrix::all_ones(psi));
        assert_eq!(lf.raw(), 4.0);
        assert_eq!(lf.per_dimension(), 1.0);
        let f5 = gf(5);
        let code = build_ud_aiep(&f5, 2).unwrap();
        let id = MultiplexMatrix::new(code, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(loading_factor(&id).raw(), 1.0);
    }

    #[test]
    fn ffmc_blocks() {
        let f16 = build_field(2, 4, None).unwrap();
        assert_eq!(ffmc_encode(&f16, &[1, 1, 0, 0]).unwrap().tuple(), &[1, 1, 0, 0]);
        assert!(ffmc_encode(&f16, &[0, 0, 0, 0]).unwrap().is_zero());
        assert_eq!(ffmc_encode(&f16, &[0, 1, 1, 0]).unwrap().tuple(), &[0, 1, 1, 0]);
        assert!(ffmc_encode(&f16, &[0, 1]).is_err());
        let rows: Vec<Vec<u32>> = FfmcGenerator::new(f16).unwrap().rows().iter().map(|e| e.tuple().to_vec()).collect();
        assert_eq!(rows, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    }

    #[test]
    fn csv_table() {
        let mux = MultiplexMatrix::all_ones(build_ud_aiep(&gf(5), 2).unwrap());
        assert_eq!(mux.table_csv().unwrap(), "w,u_1,u_2\n3,1,2\n4,1,3\n1,4,2\n2,4,3\n");
    }
}
