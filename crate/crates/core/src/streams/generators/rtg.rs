//! Random tree concepts.
//!
//! A random decision tree is grown once over `n_nominal` nominal features
//! (each with `nominal_values` values) and `n_numeric` numeric features in
//! [0, 1]. Nodes at depth `>= first_leaf_level` become leaves with
//! probability `leaf_fraction`; nodes at `max_depth` always do. Nominal
//! features are used at most once per path; numeric splits draw a threshold
//! inside the interval still reachable on the path. Leaves carry a uniform
//! random class. Instances are uniform over the feature space and labeled
//! by the tree.

use rand::Rng as _;

use super::{check, numbered, Concept};
use crate::rng::{derive, seeded, Rng};
use crate::streams::{Feature, Instance, StreamSchema};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct RtgParams {
    pub n_classes: usize,
    pub n_nominal: usize,
    pub n_numeric: usize,
    pub nominal_values: usize,
    pub first_leaf_level: usize,
    pub max_depth: usize,
    pub leaf_fraction: f64,
}

impl Default for RtgParams {
    fn default() -> Self {
        RtgParams {
            n_classes: 2,
            n_nominal: 5,
            n_numeric: 5,
            nominal_values: 5,
            first_leaf_level: 3,
            max_depth: 5,
            leaf_fraction: 0.15,
        }
    }
}

impl RtgParams {
    pub(crate) fn validate(&self) -> Result<()> {
        check(self.n_classes >= 2, "n_classes", "must be at least 2")?;
        check(
            self.n_nominal + self.n_numeric >= 1,
            "n_numeric",
            "the concept needs at least one feature",
        )?;
        check(
            self.n_nominal == 0 || self.nominal_values >= 2,
            "nominal_values",
            "must be at least 2",
        )?;
        check(
            self.first_leaf_level <= self.max_depth,
            "first_leaf_level",
            "cannot exceed max_depth",
        )?;
        check(
            (0.0..=1.0).contains(&self.leaf_fraction),
            "leaf_fraction",
            "must lie in [0, 1]",
        )
    }
}

enum Node {
    Leaf(usize),
    Nominal { feature: usize, children: Vec<Node> },
    Numeric { feature: usize, threshold: f64, children: Box<[Node; 2]> },
}

pub(crate) struct RandomTree {
    params: RtgParams,
    schema: StreamSchema,
    root: Node,
    rng: Rng,
}

impl RandomTree {
    pub(crate) fn new(params: RtgParams, seed: u64) -> Self {
        let mut tree_rng = seeded(derive(seed, 0));
        let nominal: Vec<usize> = (0..params.n_nominal).collect();
        let mut lo = vec![0.0; params.n_numeric];
        let mut hi = vec![1.0; params.n_numeric];
        let root = grow(&params, &mut tree_rng, 0, &nominal, &mut lo, &mut hi);
        let mut features: Vec<Feature> = (1..=params.n_nominal)
            .map(|i| Feature::nominal(format!("nom{i}"), numbered("value", params.nominal_values)))
            .collect();
        features.extend((1..=params.n_numeric).map(|i| Feature::numeric(format!("num{i}"))));
        let schema =
            StreamSchema::new("RTG", features, numbered("class", params.n_classes)).expect("validated schema");
        RandomTree {
            params,
            schema,
            root,
            rng: seeded(derive(seed, 1)),
        }
    }
}

fn grow(p: &RtgParams, rng: &mut Rng, depth: usize, nominal: &[usize], lo: &mut [f64], hi: &mut [f64]) -> Node {
    let n_candidates = nominal.len() + p.n_numeric;
    if depth >= p.max_depth
        || n_candidates == 0
        || (depth >= p.first_leaf_level && rng.random::<f64>() < p.leaf_fraction)
    {
        return Node::Leaf(rng.random_range(0..p.n_classes));
    }
    let pick = rng.random_range(0..n_candidates);
    if pick < nominal.len() {
        let feature = nominal[pick];
        let rest: Vec<usize> = nominal.iter().copied().filter(|&f| f != feature).collect();
        let children = (0..p.nominal_values)
            .map(|_| grow(p, rng, depth + 1, &rest, lo, hi))
            .collect();
        Node::Nominal { feature, children }
    } else {
        let j = pick - nominal.len();
        let threshold = lo[j] + (hi[j] - lo[j]) * rng.random::<f64>();
        let saved_hi = hi[j];
        hi[j] = threshold;
        let left = grow(p, rng, depth + 1, nominal, lo, hi);
        hi[j] = saved_hi;
        let saved_lo = lo[j];
        lo[j] = threshold;
        let right = grow(p, rng, depth + 1, nominal, lo, hi);
        lo[j] = saved_lo;
        Node::Numeric {
            feature: p.n_nominal + j,
            threshold,
            children: Box::new([left, right]),
        }
    }
}

impl Concept for RandomTree {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn draw(&mut self) -> Instance {
        let mut x = Vec::with_capacity(self.params.n_nominal + self.params.n_numeric);
        for _ in 0..self.params.n_nominal {
            x.push(self.rng.random_range(0..self.params.nominal_values) as f64);
        }
        for _ in 0..self.params.n_numeric {
            x.push(self.rng.random::<f64>());
        }
        let mut node = &self.root;
        let y = loop {
            match node {
                Node::Leaf(class) => break *class,
                Node::Nominal { feature, children } => node = &children[x[*feature] as usize],
                Node::Numeric {
                    feature,
                    threshold,
                    children,
                } => node = &children[usize::from(x[*feature] > *threshold)],
            }
        };
        Instance::labeled(x, y)
    }
}
