//! Reference values shared by the integration and acceptance tests.

#![allow(dead_code)]

/// `(A, B, C, D)` of `(Aπ² + B)/(Cπ² + D)` and the printed decimal, for r2 = 1..10.
pub type TableEntry = ((i64, i64, i64, i64), f64);

pub const TABLE1_MINUS: [TableEntry; 10] = [
    ((2, 0, 1, -4), 3.362953864),
    ((6, 0, 3, -20), 6.162845000),
    ((16, 0, 8, -57), 7.192005083),
    ((54, 0, 27, -205), 8.668909282),
    ((1728, 0, 864, -6565), 8.690997496),
    ((300, 0, 150, -1211), 10.98899223),
    ((86400, 0, 43200, -338681), 9.724867074),
    ((132300, 0, 66150, -534587), 11.03878708),
    ((940800, 0, 470400, -3801647), 11.04061736),
    ((71442, 0, 35721, -294473), 12.14040518),
];

pub const TABLE1_PLUS: [TableEntry; 10] = [
    ((6, 0, 3, -14), 3.793858357),
    ((2, 0, 1, -8), 10.55796017),
    ((96, 0, 48, -373), 9.405127174),
    ((54, 0, 27, -232), 15.45734242),
    ((10368, 0, 5184, -42797), 12.22991528),
    ((150, 0, 75, -668), 20.49894619),
    ((103680, 0, 51840, -440701), 14.42473632),
    ((66150, 0, 33075, -294856), 20.67290169),
    ((1128960, 0, 564480, -4937467), 17.58230823),
    ((71442, 0, 35721, -322256), 23.27373406),
];

pub const TABLE2_MINUS: [TableEntry; 10] = [
    ((2, 0, 1, -2), 2.508284762),
    ((2, 0, 1, -4), 3.362953864),
    ((32, 0, 16, -69), 3.552067296),
    ((54, 0, 27, -125), 3.767042717),
    ((3456, 0, 1728, -8005), 3.769124031),
    ((300, 0, 150, -743), 4.015077389),
    ((172800, 0, 86400, -414281), 3.889740382),
    ((132300, 0, 66150, -327931), 4.018388861),
    ((1881600, 0, 940800, -4664047), 4.018510114),
    ((71442, 0, 35721, -180973), 4.109498873),
];

pub const TABLE2_PLUS: [TableEntry; 10] = [
    ((6, 0, 3, -8), 2.740438628),
    ((9, 0, 4, -24), 5.738728718),
    ((432, 0, 184, -1071), 5.722990389),
    ((108, 0, 45, -304), 7.606512209),
    ((25920, 0, 10656, -68555), 6.986661787),
    ((675, 0, 275, -1953), 8.752624192),
    ((1814400, 0, 734400, -4949917), 7.791520131),
    ((264600, 0, 106575, -766112), 9.139383255),
    ((25401600, 0, 10192000, -71413173), 8.592266790),
    ((178605, 0, 71442, -521890), 9.621306357),
];

/// Agreement to 9 significant digits: `|computed - printed| ≤ 0.5·10^(e-8)`, `e = ⌊log10 printed⌋`.
pub fn agrees_to_nine_digits(computed: f64, printed: f64) -> bool {
    let e = printed.abs().log10().floor() as i32;
    (computed - printed).abs() <= 0.5 * 10f64.powi(e - 8)
}

pub const ERDOS_BORWEIN_PREFIX: &str = "1.606695152415291763";
