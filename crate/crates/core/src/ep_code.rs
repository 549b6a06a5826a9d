//! Element pairs and EP codes: AIEP partitions of GF(p), UD-AIEP codes and
//! the set Ξ, orthogonal layered codes over GF(p^m), and the binary
//! orthogonal code Ψ_B over GF(2^m).

use crate::error::{Error, Result};
use crate::gf::{build_field, FieldElement, FieldSpec};
use std::collections::HashMap;
use std::fmt;

/// Largest user count for which all 2^J sum patterns are enumerated.
pub const ENUMERATION_GUARD: usize = 24;

/// An ordered pair of distinct elements: bit 0 maps to `e0`, bit 1 to `e1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementPair {
    e0: FieldElement,
    e1: FieldElement,
    additive_inverse: bool,
}

impl ElementPair {
    pub fn new(e0: FieldElement, e1: FieldElement) -> Result<Self> {
        if e0.field() != e1.field() {
            return Err(Error::FieldMismatch);
        }
        if e0 == e1 {
            return Err(Error::InvalidArgument("pair elements must differ".into()));
        }
        let f = e0.field().clone();
        let additive_inverse =
            !e0.is_zero() && !e1.is_zero() && f.add(&e0, &e1)?.is_zero();
        Ok(ElementPair { e0, e1, additive_inverse })
    }

    /// The AIEP C_j = (j, p − j) of a prime field.
    pub fn aiep(field: &FieldSpec, j: u32) -> Result<Self> {
        let p = field.p();
        if field.m() != 1 || j == 0 || 2 * j >= p {
            return Err(Error::InvalidArgument(format!("no AIEP C_{j} in {field}")));
        }
        ElementPair::new(field.from_packed(j as u64)?, field.from_packed((p - j) as u64)?)
    }

    /// The base pair C_B = (0, 1).
    pub fn base(field: &FieldSpec) -> Self {
        ElementPair { e0: field.zero(), e1: field.one(), additive_inverse: false }
    }

    pub fn e0(&self) -> &FieldElement {
        &self.e0
    }

    pub fn e1(&self) -> &FieldElement {
        &self.e1
    }

    pub fn element(&self, bit: u8) -> &FieldElement {
        if bit == 0 {
            &self.e0
        } else {
            &self.e1
        }
    }

    pub fn is_additive_inverse(&self) -> bool {
        self.additive_inverse
    }

    pub fn field(&self) -> &FieldSpec {
        self.e0.field()
    }

    /// The R-pair (e1, e0).
    pub fn reverse(&self) -> Self {
        ElementPair { e0: self.e1.clone(), e1: self.e0.clone(), additive_inverse: self.additive_inverse }
    }

    /// Prime-field AIEP index j of (j, p − j) or its reverse.
    pub fn aiep_index(&self) -> Option<u32> {
        if !self.additive_inverse || self.field().m() != 1 {
            return None;
        }
        let a = self.e0.tuple()[0];
        Some(a.min(self.field().p() - a))
    }
}

impl fmt::Debug for ElementPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e0, self.e1)
    }
}

impl fmt::Display for ElementPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e0, self.e1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    /// Ψ_s over a prime field.
    PrimeAiep,
    /// One layer Ψ_{o,i} = α^i · {C_1, …, C_L}.
    OrthogonalLayer,
    /// The cascade Ψ_o of all layers.
    CascadedOrthogonal,
    /// Ψ_B over GF(2^m).
    BinaryOrthogonal,
}

/// An ordered collection of element pairs, one per user.
#[derive(Clone, Debug, PartialEq)]
pub struct EpCode {
    field: FieldSpec,
    pairs: Vec<ElementPair>,
    kind: CodeKind,
    uspm_certified: bool,
}

impl EpCode {
    /// Builds an uncertified code; pairs must be mutually disjoint.
    pub fn new(field: FieldSpec, pairs: Vec<ElementPair>, kind: CodeKind) -> Result<Self> {
        for (a, pa) in pairs.iter().enumerate() {
            if pa.field() != &field {
                return Err(Error::FieldMismatch);
            }
            for pb in &pairs[a + 1..] {
                let shared = [&pa.e0, &pa.e1].iter().any(|e| **e == pb.e0 || **e == pb.e1);
                if shared {
                    return Err(Error::InvalidArgument(format!("pairs {pa} and {pb} overlap")));
                }
            }
        }
        Ok(EpCode { field, pairs, kind, uspm_certified: false })
    }

    /// Like [`EpCode::new`] without the disjointness check, so that
    /// deliberately broken codes can be handed to [`verify_uspm`].
    pub fn unchecked(field: FieldSpec, pairs: Vec<ElementPair>, kind: CodeKind) -> Self {
        EpCode { field, pairs, kind, uspm_certified: false }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn pairs(&self) -> &[ElementPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn is_certified(&self) -> bool {
        self.uspm_certified
    }

    /// Runs [`verify_uspm`] under the all-ones multiplexer and records the
    /// outcome; a failing code is returned with the error.
    pub fn certify(mut self) -> Result<Self> {
        let report = verify_uspm(&self, &all_ones(self.len()))?;
        if !report.is_certified(self.kind, self.field.p()) {
            return Err(Error::Construction(format!("code {:?} is not USPM", self.pairs)));
        }
        self.uspm_certified = true;
        Ok(self)
    }

    /// Replaces pair `j` (0-based) by its reverse. Certification carries over.
    pub fn with_reversed(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.pairs[j] = out.pairs[j].reverse();
        out
    }

    /// One pair per line `<e0> <e1>` after a `# field <descriptor>` header.
    pub fn to_text(&self) -> String {
        let mut s = format!("# field {}\n", self.field);
        for pair in &self.pairs {
            s.push_str(&format!("{} {}\n", pair.e0, pair.e1));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let descriptor = header
            .strip_prefix("# field")
            .ok_or_else(|| Error::Parse("missing `# field` header".into()))?;
        let field: FieldSpec = descriptor.trim().parse()?;
        let mut pairs = Vec::new();
        for line in lines {
            if line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("expected two elements in `{line}`")));
            };
            pairs.push(ElementPair::new(parse_element(&field, a)?, parse_element(&field, b)?)?);
        }
        let kind = classify(&field, &pairs);
        EpCode::new(field, pairs, kind)
    }
}

fn classify(field: &FieldSpec, pairs: &[ElementPair]) -> CodeKind {
    if field.m() == 1 {
        CodeKind::PrimeAiep
    } else if field.p() == 2 && pairs.iter().all(|pr| pr.e0.is_zero()) {
        CodeKind::BinaryOrthogonal
    } else {
        CodeKind::CascadedOrthogonal
    }
}

/// Parses an element written as by `Display`: an integer for prime fields,
/// concatenated digits when p < 10, comma-separated digits otherwise.
pub fn parse_element(field: &FieldSpec, text: &str) -> Result<FieldElement> {
    let bad = || Error::Parse(format!("bad element `{text}` for {field}"));
    if field.m() == 1 {
        let v: u64 = text.parse().map_err(|_| bad())?;
        return field.from_packed(v).map_err(|_| bad());
    }
    let digits: Vec<u32> = if field.p() < 10 {
        text.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect::<Result<_>>()?
    } else {
        text.split(',').map(|d| d.parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    field.from_tuple(&digits).map_err(|_| bad())
}

/// Outcome of the exhaustive sum-pattern check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UspmReport {
    pub users: usize,
    /// All 2^J FFSP vectors are pairwise distinct.
    pub distinct: bool,
    /// Some pattern sums to the all-zero vector.
    pub zero_ffsp: bool,
    /// Two colliding bit patterns, user 1 first, when not distinct.
    pub witness: Option<(Vec<u8>, Vec<u8>)>,
}

impl UspmReport {
    /// Prime-field AIEP codes over p > 2 must also avoid the zero FFSP.
    pub fn is_certified(&self, kind: CodeKind, p: u32) -> bool {
        self.distinct && !(kind == CodeKind::PrimeAiep && p > 2 && self.zero_ffsp)
    }
}

/// The J×1 all-ones multiplex matrix.
pub fn all_ones(users: usize) -> Vec<Vec<u8>> {
    vec![vec![1]; users]
}

/// Bits of pattern `idx` for `users` users, user 1 as the most significant bit.
pub fn pattern_bits(idx: u64, users: usize) -> Vec<u8> {
    (0..users).map(|j| ((idx >> (users - 1 - j)) & 1) as u8).collect()
}

/// FFSP digit vector (T columns × m digits) of one bit pattern.
pub(crate) fn ffsp_digits(code: &EpCode, a: &[Vec<u8>], bits: &[u8]) -> Vec<u32> {
    let p = code.field.p();
    let m = code.field.m();
    let t_cols = a.first().map_or(0, Vec::len);
    let mut acc = vec![0u32; t_cols * m];
    for (j, pair) in code.pairs.iter().enumerate() {
        let e = pair.element(bits[j]).tuple();
        for (t, &sel) in a[j].iter().enumerate() {
            if sel == 1 {
                for (d, &x) in e.iter().enumerate() {
                    let slot = &mut acc[t * m + d];
                    *slot = (*slot + x) % p;
                }
            }
        }
    }
    acc
}

/// Checks that all 2^J sum patterns under the multiplexer `a` (J rows of T
/// bits) are distinct. Exhaustive; J is capped at [`ENUMERATION_GUARD`].
pub fn verify_uspm(code: &EpCode, a: &[Vec<u8>]) -> Result<UspmReport> {
    let users = code.len();
    if users > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard(users));
    }
    if a.len() != users {
        return Err(Error::Dimension { expected: users, got: a.len() });
    }
    let mut seen: HashMap<Vec<u32>, u64> = HashMap::with_capacity(1 << users.min(20));
    let mut zero_ffsp = false;
    let mut witness = None;
    for idx in 0..1u64 << users {
        let bits = pattern_bits(idx, users);
        let w = ffsp_digits(code, a, &bits);
        if w.iter().all(|&d| d == 0) {
            zero_ffsp = true;
        }
        if let Some(&prev) = seen.get(&w) {
            if witness.is_none() {
                witness = Some((pattern_bits(prev, users), bits));
            }
        } else {
            seen.insert(w, idx);
        }
    }
    Ok(UspmReport { users, distinct: witness.is_none(), zero_ffsp, witness })
}

/// The (p − 1)/2 AIEPs (j, p − j) of GF(p); for p = 2 the single base pair.
pub fn aiep_partition(field: &FieldSpec) -> Result<Vec<ElementPair>> {
    if field.m() != 1 {
        return Err(Error::InvalidArgument("AIEP partition needs a prime field".into()));
    }
    if field.p() == 2 {
        return Ok(vec![ElementPair::base(field)]);
    }
    (1..=(field.p() - 1) / 2).map(|j| ElementPair::aiep(field, j)).collect()
}

/// floor(log2(p − 1)), the user bound of a single UD-AIEP code.
pub fn ud_user_bound(p: u32) -> usize {
    if p <= 2 {
        0
    } else {
        (31 - (p - 1).leading_zeros()) as usize
    }
}

/// η_p = floor((p − 1) / (2 floor(log2(p − 1)))).
pub fn eta(p: u32) -> usize {
    let b = ud_user_bound(p);
    if b == 0 {
        0
    } else {
        (p as usize - 1) / (2 * b)
    }
}

/// The powers-of-two code {C_1, C_2, C_4, …} of J users, certified by
/// exhaustive check.
pub fn build_ud_aiep(field: &FieldSpec, users: usize) -> Result<EpCode> {
    if field.m() != 1 {
        return Err(Error::InvalidArgument("UD-AIEP codes live in prime fields".into()));
    }
    let bound = ud_user_bound(field.p());
    if users == 0 || users > bound {
        return Err(Error::TooManyUsers { users, bound });
    }
    let pairs = (0..users)
        .map(|i| ElementPair::aiep(field, 1 << i))
        .collect::<Result<Vec<_>>>()?;
    EpCode::new(field.clone(), pairs, CodeKind::PrimeAiep)?.certify()
}

/// The set Ξ: repeatedly take the first USPM code of floor(log2(p − 1))
/// unused AIEPs in ascending depth-first order, until η_p codes are found or
/// the remaining AIEPs admit none.
pub fn enumerate_ud_codes(field: &FieldSpec) -> Result<Vec<EpCode>> {
    if field.m() != 1 {
        return Err(Error::InvalidArgument("UD-AIEP codes live in prime fields".into()));
    }
    let p = field.p();
    let size = ud_user_bound(p);
    if p <= 3 || size < 1 {
        return Ok(Vec::new());
    }
    let mut unused: Vec<u32> = (1..=(p - 1) / 2).collect();
    let mut out = Vec::new();
    while out.len() < eta(p) {
        let mut chosen = Vec::with_capacity(size);
        if !dfs_code(p, &unused, 0, size, &mut chosen) {
            break;
        }
        unused.retain(|j| !chosen.contains(j));
        let pairs = chosen
            .iter()
            .map(|&j| ElementPair::aiep(field, j))
            .collect::<Result<Vec<_>>>()?;
        out.push(EpCode::new(field.clone(), pairs, CodeKind::PrimeAiep)?.certify()?);
    }
    Ok(out)
}

/// Sums ±j_1 ± … ± j_n mod p distinct and nonzero. A sub-collection of a
/// USPM collection is USPM, which justifies pruning on prefixes.
fn aiep_sums_unique(p: u32, js: &[u32]) -> bool {
    let mut seen = vec![false; p as usize];
    for idx in 0..1u32 << js.len() {
        let s = js.iter().enumerate().fold(0u32, |acc, (b, &j)| {
            let term = if idx >> b & 1 == 1 { p - j } else { j };
            (acc + term) % p
        });
        if s == 0 || seen[s as usize] {
            return false;
        }
        seen[s as usize] = true;
    }
    true
}

fn dfs_code(p: u32, pool: &[u32], start: usize, size: usize, chosen: &mut Vec<u32>) -> bool {
    if chosen.len() == size {
        return true;
    }
    for i in start..pool.len() {
        chosen.push(pool[i]);
        if aiep_sums_unique(p, chosen) && dfs_code(p, pool, i + 1, size, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Ψ_o over GF(p^m): m·L pairs α^i · C_l, layer index i outer.
pub fn build_orthogonal(field: &FieldSpec, layers_pairs: usize) -> Result<EpCode> {
    let p = field.p();
    if p == 2 || layers_pairs == 0 || layers_pairs > (p as usize - 1) / 2 {
        return Err(Error::InvalidArgument(format!(
            "L = {layers_pairs} outside 1..={} for p = {p}",
            (p.max(3) - 1) / 2
        )));
    }
    let m = field.m();
    let mut pairs = Vec::with_capacity(m * layers_pairs);
    for i in 0..m {
        for l in 1..=layers_pairs as u32 {
            let mut t0 = vec![0; m];
            let mut t1 = vec![0; m];
            t0[i] = l;
            t1[i] = p - l;
            pairs.push(ElementPair::new(field.from_tuple(&t0)?, field.from_tuple(&t1)?)?);
        }
    }
    let kind = if m == 1 { CodeKind::PrimeAiep } else { CodeKind::CascadedOrthogonal };
    EpCode::new(field.clone(), pairs, kind)
}

/// Layer i of Ψ_o alone.
pub fn orthogonal_layer(field: &FieldSpec, layers_pairs: usize, i: usize) -> Result<EpCode> {
    let full = build_orthogonal(field, layers_pairs)?;
    let pairs = full.pairs[i * layers_pairs..(i + 1) * layers_pairs].to_vec();
    EpCode::new(field.clone(), pairs, CodeKind::OrthogonalLayer)
}

/// Ψ_B over GF(2^m): pair j is (0, α^{j−1}).
pub fn build_psi_b(m: usize) -> Result<EpCode> {
    let field = build_field(2, m, None)?;
    let pairs = (0..m)
        .map(|i| ElementPair::new(field.zero(), field.basis(i)))
        .collect::<Result<Vec<_>>>()?;
    let kind = if m == 1 { CodeKind::PrimeAiep } else { CodeKind::BinaryOrthogonal };
    Ok(EpCode { field, pairs, kind, uspm_certified: false })
}
