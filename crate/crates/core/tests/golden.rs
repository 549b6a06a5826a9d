//! Published worked values, replayed through the library.

use ffma_core::replay::{example1, example2, example4, example5, example6, group_bits};
use ffma_core::FieldElement;

fn tuple_str(e: &FieldElement) -> String {
    e.tuple().iter().map(|d| d.to_string()).collect()
}

fn digits(s: &str) -> Vec<u32> {
    s.chars().filter_map(|c| c.to_digit(10)).collect()
}

fn bits(s: &str) -> Vec<u8> {
    digits(s).into_iter().map(|d| d as u8).collect()
}

#[test]
fn gf5_two_user_code() {
    let ex = example1().unwrap();
    let pairs: Vec<(u32, u32)> = ex.plain.pairs.iter().map(|p| (p.e0().tuple()[0], p.e1().tuple()[0])).collect();
    assert_eq!(pairs, vec![(1, 4), (2, 3)]);
    let rev: Vec<(u32, u32)> = ex.reversed.pairs.iter().map(|p| (p.e0().tuple()[0], p.e1().tuple()[0])).collect();
    assert_eq!(rev, vec![(1, 4), (3, 2)]);
    // patterns 00, 01, 10, 11
    assert_eq!(ex.plain.ffsp_values(), vec![3, 4, 1, 2]);
    assert_eq!(ex.reversed.ffsp_values(), vec![4, 3, 2, 1]);
    assert_eq!(ex.demux_of_3, vec![0, 0]);
}

#[test]
fn gf17_code_set() {
    let ex = example2().unwrap();
    let sets: Vec<Vec<(u32, u32)>> = ex
        .codes
        .iter()
        .map(|t| t.pairs.iter().map(|p| (p.e0().tuple()[0], p.e1().tuple()[0])).collect())
        .collect();
    assert_eq!(sets[0], vec![(1, 16), (2, 15), (4, 13), (8, 9)]);
    assert_eq!(sets[1], vec![(3, 14), (5, 12), (6, 11), (7, 10)]);
    for t in &ex.codes {
        let mut w = t.ffsp_values();
        w.sort_unstable();
        assert_eq!(w, (1..=16).collect::<Vec<_>>());
    }
}

#[test]
fn eight_users_over_two_columns() {
    let ex = example4().unwrap();
    assert_eq!(ex.a_m_transposed, vec!["11010001", "00101110"]);
    assert_eq!(ex.w, vec![15, 4]);
    assert_eq!(ex.u, (1..=8).collect::<Vec<_>>());
    assert_eq!(ex.loading, 4.0);
}

#[test]
fn three_users_noiseless_gmac() {
    let ex = example5().unwrap();
    let u: Vec<String> = ex.u.iter().map(|row| row.iter().map(tuple_str).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(u, ["1000,1000,0000", "0100,0000,0100", "0000,0000,0010"]);
    let w: Vec<String> = ex.w.iter().map(tuple_str).collect();
    assert_eq!(w.join(","), "1100,1000,0110");
    let v: Vec<String> = ex.v.iter().map(|row| group_bits(row, 4)).collect();
    assert_eq!(v, ["1000,1000,0000,1001", "0100,0000,0100,0101", "0000,0000,0010,1000"]);
    let x1 = [1., -1., -1., -1., 1., -1., -1., -1., -1., -1., -1., -1., 1., -1., -1., 1.];
    let x2 = [-1., 1., -1., -1., -1., -1., -1., -1., -1., 1., -1., -1., -1., 1., -1., 1.];
    let x3 = [-1., -1., -1., -1., -1., -1., -1., -1., -1., -1., 1., -1., 1., -1., -1., -1.];
    assert_eq!(ex.x, vec![x1.to_vec(), x2.to_vec(), x3.to_vec()]);
    let r = [-1., -1., -3., -3., -1., -3., -3., -3., -3., -1., -1., -3., 1., -1., -3., 1.];
    assert_eq!(ex.r, r.to_vec());
    assert_eq!(ex.v_hat, bits("1100100001100100"));
    let w_hat: Vec<String> = ex.w_hat.iter().map(tuple_str).collect();
    assert_eq!(w_hat.join(","), "1100,1000,0110");
    assert_eq!(ex.b_hat, vec![bits("110"), bits("101"), bits("001")]);
    assert_eq!(ex.b_hat, ex.b);
    // shortened rows keep the K own bits and the n − mK parity bits
    assert!(ex.shortened.iter().all(|s| s.len() == 3 + 4));
}

#[test]
fn four_users_noiseless_dsc() {
    let ex = example6().unwrap();
    let v: Vec<String> = ex.v.iter().map(|row| group_bits(row, 4)).collect();
    assert_eq!(v, ["1000,1000,0000,1001", "0100,0000,0100,0101", "0000,0000,0010,1000", "0000,1000,0000,0001"]);
    assert_eq!(group_bits(&ex.v_c[0], 4), "1100,1000,0110,0100");
    assert_eq!(group_bits(&ex.v_c[1], 4), "0000,1000,0000,0001");
    assert_eq!(ex.s_c[0], digits("4411 4111 1441 1411"));
    assert_eq!(ex.s_c[1], digits("2222 3222 2222 2223"));
    assert_eq!(ex.x, digits("1133 2333 3113 3134"));
    assert_eq!(ex.s_hat, ex.s_c);
    assert_eq!(ex.b_hat, vec![bits("110"), bits("101"), bits("001"), bits("010")]);
}
