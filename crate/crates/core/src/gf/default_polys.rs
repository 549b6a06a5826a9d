/// (p, m, g_0..g_m)
const DEFAULT_POLYS: &[(u32, usize, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]),
    (2, 13, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 14, &[1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 15, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 16, &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 2, &[2, 1, 1]),
    (5, 3, &[2, 3, 0, 1]),
    (5, 4, &[2, 2, 1, 0, 1]),
    (5, 5, &[2, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (5, 7, &[2, 3, 0, 0, 0, 0, 0, 1]),
    (5, 8, &[3, 2, 1, 0, 0, 0, 0, 0, 1]),
    (5, 9, &[3, 2, 1, 0, 0, 0, 0, 0, 0, 1]),
    (5, 10, &[3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 11, &[2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 12, &[3, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 13, &[2, 3, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 14, &[2, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 15, &[2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 16, &[2, 3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 2, &[3, 1, 1]),
    (17, 3, &[3, 1, 0, 1]),
    (17, 4, &[11, 1, 0, 0, 1]),
    (17, 5, &[3, 1, 0, 0, 0, 1]),
    (17, 6, &[12, 1, 0, 0, 0, 0, 1]),
    (17, 7, &[5, 1, 0, 0, 0, 0, 0, 1]),
    (17, 8, &[3, 3, 1, 0, 0, 0, 0, 0, 1]),
    (17, 9, &[3, 7, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 10, &[7, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 11, &[7, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 12, &[5, 2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 13, &[6, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 14, &[6, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 15, &[6, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (17, 16, &[10, 4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
];
