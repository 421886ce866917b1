//! The experiment table: every family with the tensor and direction it is
//! usually reported for, and the best available reference value.

use cest_core::{
    generators, ng_qi_zhou, sunflower_lambda_star, Direction, EigKind, Hypergraph, Result, TensorSelector,
};

pub struct BenchCase {
    pub family: String,
    pub graph: Hypergraph,
    pub selector: TensorSelector,
    pub kind: EigKind,
    pub direction: Direction,
    pub reference: Option<f64>,
}

fn perron(h: &Hypergraph, sel: TensorSelector) -> Result<f64> {
    Ok(ng_qi_zhou::<f64>(h, sel, 1e-13, 1_000_000)?.lambda)
}

/// `quick` drops the largest instance of each family.
pub fn suite(quick: bool) -> Result<Vec<BenchCase>> {
    let mut cases = Vec::new();

    let squid = generators::squid(4)?;
    cases.push(BenchCase {
        family: "squid(k=4)".into(),
        reference: Some(-perron(&squid, TensorSelector::Adjacency)?),
        graph: squid,
        selector: TensorSelector::Adjacency,
        kind: EigKind::H,
        direction: Direction::Min,
    });

    cases.push(BenchCase {
        family: "blowup-petersen(t=2)".into(),
        graph: generators::blowup(&generators::petersen(), 2)?,
        selector: TensorSelector::SignlessLaplacian,
        kind: EigKind::H,
        direction: Direction::Min,
        reference: Some(1.0),
    });

    for s in 1..=if quick { 2 } else { 3 } {
        let g = generators::grid(s)?;
        cases.push(BenchCase {
            family: format!("grid(s={s})"),
            reference: Some(perron(&g, TensorSelector::SignlessLaplacian)?),
            graph: g,
            selector: TensorSelector::Laplacian,
            kind: EigKind::H,
            direction: Direction::Max,
        });
    }

    let flowers: &[(usize, usize)] = if quick {
        &[(4, 10), (4, 100), (6, 10)]
    } else {
        &[(4, 10), (4, 100), (4, 1000), (6, 10), (6, 100)]
    };
    for &(k, delta) in flowers {
        cases.push(BenchCase {
            family: format!("sunflower(k={k},delta={delta})"),
            graph: generators::sunflower(k, delta)?,
            selector: TensorSelector::Laplacian,
            kind: EigKind::H,
            direction: Direction::Max,
            reference: Some(sunflower_lambda_star(k, delta)?),
        });
    }

    for s in 0..=if quick { 1 } else { 3 } {
        for sel in [TensorSelector::Laplacian, TensorSelector::SignlessLaplacian] {
            cases.push(BenchCase {
                family: format!("icosahedron(s={s})"),
                graph: generators::icosahedron(s)?,
                selector: sel,
                kind: EigKind::Z,
                direction: Direction::Max,
                reference: Some(if s == 0 { 5.0 } else { 6.0 }),
            });
        }
    }
    Ok(cases)
}
