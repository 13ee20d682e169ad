//! Isometry instances shared by the integration suites.

#![allow(dead_code)]

use isoforge::isometry::{Kind, Params};
use isoforge::partitions::part;
use isoforge::Partition;

pub fn e() -> Partition {
    Partition::empty()
}

pub struct Instance {
    pub criterion: u32,
    pub name: &'static str,
    pub kind: Kind,
    pub params: Params,
}

fn inst(criterion: u32, name: &'static str, kind: Kind, params: Params) -> Instance {
    Instance {
        criterion,
        name,
        kind,
        params,
    }
}

/// The instances named by criteria 3 to 10.
pub fn instances() -> Vec<Instance> {
    let mut cross_back = Params::single(3, 1, part(&[2]), part(&[1]));
    cross_back.source_alt = true;
    let mut couronne = Params::tuple(3, vec![part(&[1]), e()], vec![part(&[2]), e()], vec![1, 0]);
    couronne.l = 2;
    vec![
        inst(
            3,
            "A7 (1) -> A6 (), p = 3, w = 2",
            Kind::MainAn,
            Params::single(3, 2, part(&[1]), e()),
        ),
        inst(
            4,
            "A4 () -> A5 (1), p = 2, w = 2",
            Kind::MainAnP2,
            Params::single(2, 2, e(), part(&[1])),
        ),
        inst(
            4,
            "A6 () -> A7 (1), p = 2, w = 3",
            Kind::MainAnP2,
            Params::single(2, 3, e(), part(&[1])),
        ),
        inst(
            5,
            "2.S3 () -> 2.S4 (1), same sign",
            Kind::MainTilde,
            Params::single(3, 1, e(), part(&[1])),
        ),
        inst(
            5,
            "2.S4 (1) -> 2.A5 (2), crossover",
            Kind::MainTilde,
            Params::single(3, 1, part(&[1]), part(&[2])),
        ),
        inst(
            5,
            "2.A5 (2) -> 2.S4 (1), crossover back",
            Kind::MainTilde,
            cross_back,
        ),
        inst(
            5,
            "2.A3 () -> 2.A4 (1), composed",
            Kind::BroueTilde,
            Params::single(3, 1, e(), part(&[1])),
        ),
        inst(
            6,
            "S6 () -> G3,2",
            Kind::BrGr,
            Params::single(3, 2, e(), e()),
        ),
        inst(
            7,
            "S3 () -> Z3 wr S1",
            Kind::Osima,
            Params::single(3, 1, e(), e()),
        ),
        inst(
            7,
            "S4 () -> Z2 wr S2",
            Kind::Osima,
            Params::single(2, 2, e(), e()),
        ),
        inst(
            8,
            "Z2 wr S4 ((1),()) -> Z2 wr S5 ((2),()), w = (1,0)",
            Kind::Couronne,
            couronne,
        ),
        inst(
            9,
            "D4 ((1),()) -> D6 ((2),(1)), w = (1,0)",
            Kind::DnNonconj,
            Params::tuple(
                3,
                vec![part(&[1]), e()],
                vec![part(&[2]), part(&[1])],
                vec![1, 0],
            ),
        ),
        inst(
            9,
            "D6 ((),()) -> D8 ((1),(1)), w = (1,1)",
            Kind::DnConj,
            Params::tuple(3, vec![e(), e()], vec![part(&[1]), part(&[1])], vec![1, 1]),
        ),
        inst(
            10,
            "A6 () -> H3,2",
            Kind::Fh,
            Params::single(3, 2, e(), e()),
        ),
    ]
}
