//! Worked examples replayed through the library, as typed traces.

use crate::chancode::CodeSpec;
use crate::ep_code::{enumerate_ud_codes, CodeKind, ElementPair, EpCode};
use crate::error::{Error, Result};
use crate::gf::{build_field, FieldElement};
use crate::gmac::{
    bpsk_mod, build_tables, cfsp_transmit, diagonal_rearrange, f_c2f_hard, shorten, sparse_map, Detector,
    GmacConfig, GmacSystem, Layout,
};
use crate::multiplex::{build_cudc_matrix, MultiplexMatrix};
use crate::net::{map_to_gfp, net_multiplex, NetConfig, NetSystem, Vrb};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// One FFSP table: the pairs and, per bit pattern (user 1 first), the
/// FFSP components and the users' symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FfspTable {
    pub pairs: Vec<ElementPair>,
    pub rows: Vec<(Vec<u8>, Vec<FieldElement>, Vec<FieldElement>)>,
}

impl FfspTable {
    pub fn of(mux: &MultiplexMatrix) -> Result<Self> {
        let rows = mux
            .table_rows()?
            .into_iter()
            .map(|(w, bits)| {
                let u = bits.iter().zip(mux.code().pairs()).map(|(&b, p)| p.element(b).clone()).collect();
                (bits, w, u)
            })
            .collect();
        Ok(FfspTable { pairs: mux.code().pairs().to_vec(), rows })
    }

    /// FFSP values in pattern order (single-column multiplexers).
    pub fn ffsp_values(&self) -> Vec<u32> {
        self.rows.iter().map(|(_, w, _)| w[0].tuple()[0]).collect()
    }
}

impl fmt::Display for FfspTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.pairs.iter().map(|p| p.to_string()).collect();
        writeln!(f, "pairs: {}", names.join(" "))?;
        for (bits, w, u) in &self.rows {
            let b: String = bits.iter().map(|&x| char::from(b'0' + x)).collect();
            let ws: Vec<String> = w.iter().map(|e| e.to_string()).collect();
            let us: Vec<String> = u.iter().map(|e| e.to_string()).collect();
            writeln!(f, "  bits {b}  w = ({})  u = ({})", ws.join(", "), us.join(", "))?;
        }
        Ok(())
    }
}

/// Two-user GF(5) code and the same code with C_2 reversed.
#[derive(Clone, Debug)]
pub struct Example1 {
    pub plain: FfspTable,
    pub reversed: FfspTable,
    /// Demultiplexing w = 3 with the plain code.
    pub demux_of_3: Vec<u8>,
}

/// The two disjoint 4-user codes of GF(17).
#[derive(Clone, Debug)]
pub struct Example2 {
    pub codes: Vec<FfspTable>,
}

/// Eight GF(17) users over two columns.
#[derive(Clone, Debug)]
pub struct Example4 {
    pub a_m_transposed: Vec<String>,
    pub w: Vec<u32>,
    pub u: Vec<u32>,
    pub loading: f64,
}

/// Three users over GF(2^4) with the (16, 12) code on a noiseless GMAC.
#[derive(Clone, Debug)]
pub struct Example5 {
    pub b: Vec<Vec<u8>>,
    pub u: Vec<Vec<FieldElement>>,
    pub w: Vec<FieldElement>,
    pub v: Vec<Vec<u8>>,
    pub x: Vec<Vec<f64>>,
    pub r: Vec<f64>,
    pub v_hat: Vec<u8>,
    pub w_hat: Vec<FieldElement>,
    pub b_hat: Vec<Vec<u8>>,
    /// Diagonal-form rows and the shortened rows.
    pub diagonal: Vec<Vec<u8>>,
    pub shortened: Vec<Vec<u8>>,
}

/// Four users of the network scheme over GF(5^4) on a noiseless DSC.
#[derive(Clone, Debug)]
pub struct Example6 {
    pub b: Vec<Vec<u8>>,
    pub vrbs: Vec<Vrb>,
    pub v: Vec<Vec<u8>>,
    pub v_c: Vec<Vec<u8>>,
    pub s_c: Vec<Vec<u32>>,
    pub x: Vec<u32>,
    pub s_hat: Vec<Vec<u32>>,
    pub b_hat: Vec<Vec<u8>>,
}

#[derive(Clone, Debug)]
pub enum Replay {
    One(Example1),
    Two(Example2),
    Four(Example4),
    Five(Example5),
    Six(Example6),
}

pub fn replay(example: u32) -> Result<Replay> {
    Ok(match example {
        1 => Replay::One(example1()?),
        2 => Replay::Two(example2()?),
        4 => Replay::Four(example4()?),
        5 => Replay::Five(example5()?),
        6 => Replay::Six(example6()?),
        _ => return Err(Error::InvalidArgument(format!("no replay for example {example}; use 1, 2, 4, 5 or 6"))),
    })
}

pub fn example1() -> Result<Example1> {
    let f = build_field(5, 1, None)?;
    let code = EpCode::new(f.clone(), vec![ElementPair::aiep(&f, 1)?, ElementPair::aiep(&f, 2)?], CodeKind::PrimeAiep)?
        .certify()?;
    let reversed = code.with_reversed(1).certify()?;
    let mux = MultiplexMatrix::all_ones(code);
    let demux_of_3 = mux.demux_bits(&[f.from_packed(3)?])?;
    Ok(Example1 {
        plain: FfspTable::of(&mux)?,
        reversed: FfspTable::of(&MultiplexMatrix::all_ones(reversed))?,
        demux_of_3,
    })
}

pub fn example2() -> Result<Example2> {
    let f = build_field(17, 1, None)?;
    let codes = enumerate_ud_codes(&f)?
        .into_iter()
        .map(|c| FfspTable::of(&MultiplexMatrix::all_ones(c)))
        .collect::<Result<_>>()?;
    Ok(Example2 { codes })
}

pub fn example4() -> Result<Example4> {
    let f = build_field(17, 1, None)?;
    let mux = build_cudc_matrix(&f, &enumerate_ud_codes(&f)?, 8)?;
    let w = vec![f.from_packed(15)?, f.from_packed(4)?];
    let u = mux.demux_lookup(&w)?.iter().map(|e| e.tuple()[0]).collect();
    let text = mux.to_text();
    Ok(Example4 {
        a_m_transposed: text.lines().map(str::to_owned).collect(),
        w: vec![15, 4],
        u,
        loading: crate::multiplex::loading_factor(&mux).raw(),
    })
}

pub fn example5() -> Result<Example5> {
    let b = vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 1]];
    let (users, m) = (3, 4);
    let sys = GmacSystem::new(GmacConfig {
        users,
        m,
        k_bits: 3,
        code: CodeSpec::Demo16x12,
        layout: Layout::Sparse,
        detector: Detector::Systematic,
        min_sum: Default::default(),
        mix_seed: 0,
    })?;
    let f = build_field(2, m, None)?;
    let u: Vec<Vec<FieldElement>> =
        b.iter().enumerate().map(|(j, bits)| sparse_map(bits, j + 1, m)).collect::<Result<_>>()?;
    let w = (0..3)
        .map(|k| u.iter().try_fold(f.zero(), |acc, uj| f.add(&acc, &uj[k])))
        .collect::<Result<Vec<_>>>()?;
    let v = sys.codewords(&b)?;
    let x: Vec<Vec<f64>> = v.iter().map(|vj| bpsk_mod(vj)).collect();
    let r = cfsp_transmit(&x, 0.0, &mut ChaCha8Rng::seed_from_u64(0))?;
    let table = build_tables(users);
    let v_hat: Vec<u8> = r.iter().map(|&rn| f_c2f_hard(rn, &table)).collect();
    let msg = sys.encoder().code().decode_hard(&v_hat).message;
    let w_hat = msg.chunks(m).map(|c| f.from_tuple(&c.iter().map(|&x| x as u32).collect::<Vec<_>>())).collect::<Result<Vec<_>>>()?;
    let b_hat: Vec<Vec<u8>> = (0..users).map(|j| w_hat.iter().map(|e| e.tuple()[j] as u8).collect()).collect();

    let cm = sys.codeword_matrix(&b)?;
    let d = diagonal_rearrange(&cm)?;
    let shortened = (1..=users).map(|j| shorten(&d, j)).collect::<Result<_>>()?;
    Ok(Example5 { b, u, w, v, x, r, v_hat, w_hat, b_hat, diagonal: d.rows, shortened })
}

pub fn example6() -> Result<Example6> {
    let b = vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 1], vec![0, 1, 0]];
    let vrbs = vec![
        Vrb { layer: 0, pair: 1 },
        Vrb { layer: 1, pair: 1 },
        Vrb { layer: 2, pair: 1 },
        Vrb { layer: 0, pair: 2 },
    ];
    let p = 5;
    let sys = NetSystem::new(NetConfig {
        p,
        m: 4,
        pairs: 2,
        users: 4,
        k_bits: 3,
        code: CodeSpec::Demo16x12,
        assignment: Some(vrbs.clone()),
    })?;
    let v = sys.codewords(&b)?;
    let v_c = sys.group_words(&v)?;
    let pair_index: Vec<u32> =
        sys.mux().code().pairs().iter().map(|pr| pr.aiep_index().expect("AIEP")).collect();
    let s_c: Vec<Vec<u32>> =
        v_c.iter().zip(&pair_index).map(|(g, &l)| map_to_gfp(g, l, p)).collect::<Result<_>>()?;
    let x = net_multiplex(&s_c, p)?;
    if x != sys.multiplex(&v_c) {
        return Err(Error::Construction("multiplexer table disagrees with the group sums".into()));
    }
    let f = build_field(p, 1, None)?;
    let mut s_hat: Vec<Vec<u32>> = (0..2).map(|_| Vec::with_capacity(x.len())).collect();
    for &xn in &x {
        for (l, e) in sys.mux().demux_lookup(&[f.from_packed(xn as u64)?])?.iter().enumerate() {
            s_hat[l].push(e.tuple()[0]);
        }
    }
    let b_hat = sys.receive(&x)?.bits;
    Ok(Example6 { b, vrbs, v, v_c, s_c, x, s_hat, b_hat })
}

/// Bits in groups of `m`, groups separated by commas.
pub fn group_bits(bits: &[u8], m: usize) -> String {
    bits.chunks(m)
        .map(|c| c.iter().map(|&b| char::from(b'0' + b)).collect::<String>())
        .collect::<Vec<_>>()
        .join(",")
}

fn group_digits(d: &[u32], m: usize) -> String {
    d.chunks(m)
        .map(|c| c.iter().map(|x| x.to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join(",")
}

fn signed(x: &[f64]) -> String {
    x.iter().map(|&v| format!("{v:+}")).collect::<Vec<_>>().join(",")
}

fn elems(e: &[FieldElement]) -> String {
    e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Replay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Replay::One(e) => {
                writeln!(f, "GF(5), C1 x C2")?;
                write!(f, "{}", e.plain)?;
                writeln!(f, "GF(5), C1 x C2 reversed")?;
                write!(f, "{}", e.reversed)?;
                writeln!(f, "w = 3 -> bits {}", group_bits(&e.demux_of_3, 8))
            }
            Replay::Two(e) => {
                for (i, t) in e.codes.iter().enumerate() {
                    writeln!(f, "GF(17), code {}", i + 1)?;
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Replay::Four(e) => {
                writeln!(f, "A_M^T:")?;
                for row in &e.a_m_transposed {
                    writeln!(f, "  {row}")?;
                }
                writeln!(f, "loading factor {}", e.loading)?;
                let u: Vec<String> = e.u.iter().map(u32::to_string).collect();
                writeln!(f, "w = ({}, {}) -> u = ({})", e.w[0], e.w[1], u.join(", "))
            }
            Replay::Five(e) => {
                for j in 0..e.b.len() {
                    writeln!(f, "user {}: b = {}", j + 1, group_bits(&e.b[j], 8))?;
                    writeln!(f, "  u = {}", elems(&e.u[j]))?;
                    writeln!(f, "  v = {}", group_bits(&e.v[j], 4))?;
                    writeln!(f, "  x = {}", signed(&e.x[j]))?;
                }
                writeln!(f, "w     = {}", elems(&e.w))?;
                writeln!(f, "r     = {}", signed(&e.r))?;
                writeln!(f, "v_hat = {}", group_bits(&e.v_hat, 16))?;
                writeln!(f, "w_hat = {}", elems(&e.w_hat))?;
                for (j, bh) in e.b_hat.iter().enumerate() {
                    writeln!(f, "b_hat {} = {}", j + 1, group_bits(bh, 8))?;
                }
                for (j, d) in e.diagonal.iter().enumerate() {
                    writeln!(f, "diagonal {} = {}  shortened = {}", j + 1, group_bits(d, 4), group_bits(&e.shortened[j], 16))?;
                }
                Ok(())
            }
            Replay::Six(e) => {
                for (j, vrb) in e.vrbs.iter().enumerate() {
                    writeln!(
                        f,
                        "user {}: VRB alpha^{} * C{}  b = {}  v = {}",
                        j + 1,
                        vrb.layer,
                        vrb.pair,
                        group_bits(&e.b[j], 8),
                        group_bits(&e.v[j], 4)
                    )?;
                }
                for (l, g) in e.v_c.iter().enumerate() {
                    writeln!(f, "v_c{} = {}", l + 1, group_bits(g, 4))?;
                    writeln!(f, "s_c{} = {}", l + 1, group_digits(&e.s_c[l], 4))?;
                }
                writeln!(f, "x     = {}", group_digits(&e.x, 4))?;
                for (l, s) in e.s_hat.iter().enumerate() {
                    writeln!(f, "s_hat{} = {}", l + 1, group_digits(s, 4))?;
                }
                for (j, bh) in e.b_hat.iter().enumerate() {
                    writeln!(f, "b_hat {} = {}", j + 1, group_bits(bh, 8))?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_replays() {
        for n in [1, 2, 4, 5, 6] {
            let text = replay(n).unwrap().to_string();
            assert!(!text.is_empty());
        }
        assert!(replay(3).is_err());
    }

    #[test]
    fn example6_recovers_bits() {
        let e = example6().unwrap();
        assert_eq!(e.b_hat, e.b);
        assert_eq!(e.s_hat, e.s_c);
    }
}
