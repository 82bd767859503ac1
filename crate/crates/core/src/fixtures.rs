//! The five example surfaces shipped with the crate.

use crate::io::parse_surface_str;
use crate::surface::SixLineSurface;

pub const S1_JSON: &str = include_str!("../fixtures/s1.json");
pub const S2_JSON: &str = include_str!("../fixtures/s2.json");
pub const S3_JSON: &str = include_str!("../fixtures/s3.json");
pub const S4_JSON: &str = include_str!("../fixtures/s4.json");
pub const S5_JSON: &str = include_str!("../fixtures/s5.json");

pub const S1_LINES: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [3, 5, 7], [-5, 11, -2]];
pub const S2_LINES: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 4, -3], [1, -5, -3], [1, 3, 3]];
pub const S3_LINES: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [4, 9, 1], [-1, -1, -4], [16, 25, 1]];
pub const S4_LINES: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [5, 8, 20]];

pub fn s1() -> SixLineSurface {
    parse_surface_str(S1_JSON).expect("bundled fixture")
}

pub fn s2() -> SixLineSurface {
    parse_surface_str(S2_JSON).expect("bundled fixture")
}

pub fn s3() -> SixLineSurface {
    parse_surface_str(S3_JSON).expect("bundled fixture")
}

pub fn s4() -> SixLineSurface {
    parse_surface_str(S4_JSON).expect("bundled fixture")
}

pub fn s5() -> SixLineSurface {
    parse_surface_str(S5_JSON).expect("bundled fixture")
}

/// `S_1 … S_5` in order.
pub fn all() -> Vec<SixLineSurface> {
    vec![s1(), s2(), s3(), s4(), s5()]
}

/// `S_1 … S_4`, the surfaces counted through a trace table.
pub fn six_line_surfaces() -> Vec<SixLineSurface> {
    vec![s1(), s2(), s3(), s4()]
}
