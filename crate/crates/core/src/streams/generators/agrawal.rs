//! AGRAWAL loan-applicant concepts.
//!
//! Features, in order: salary U[20k, 150k]; commission 0 if salary >= 75k
//! else U[10k, 75k]; age integer U{20..80}; elevel nominal {0..4}; car
//! {1..20}; zipcode {0..8}; hvalue (9 - zipcode) * 100k * U[0.5, 1.5];
//! hyears integer U{1..30}; loan U[0, 500k].
//!
//! elevel, car and zipcode are emitted as integer codes on numeric features
//! unless [`AgrawalParams::nominal`] is set, in which case the schema
//! declares them nominal and trees split them multiway.
//!
//! Ten boolean functions decide group A (class 0) versus group B (class 1),
//! see [`agrawal_label`]. With a nonzero perturbation fraction `p`, numeric
//! features are shifted by `range * U[-1, 1] * p` (clamped) after labeling.

use rand::Rng as _;

use super::{check, numbered, Concept};
use crate::rng::{seeded, Rng};
use crate::streams::{Feature, Instance, StreamSchema};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct AgrawalParams {
    /// Classification function `1..=10`.
    pub function: usize,
    /// Perturbation fraction in `[0, 1]`.
    pub perturbation: f64,
    /// Declare elevel, car and zipcode as nominal features.
    pub nominal: bool,
}

impl Default for AgrawalParams {
    fn default() -> Self {
        AgrawalParams {
            function: 1,
            perturbation: 0.05,
            nominal: false,
        }
    }
}

impl AgrawalParams {
    pub fn function(id: usize) -> Self {
        AgrawalParams {
            function: id,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        check((1..=10).contains(&self.function), "function", "must be in 1..=10")?;
        check(
            (0.0..=1.0).contains(&self.perturbation),
            "perturbation",
            "must lie in [0, 1]",
        )
    }
}

/// Raw (unperturbed) applicant record.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Applicant {
    pub salary: f64,
    pub commission: f64,
    pub age: f64,
    pub elevel: usize,
    pub car: usize,
    pub zipcode: usize,
    pub hvalue: f64,
    pub hyears: f64,
    pub loan: f64,
}

fn within(v: f64, lo: f64, hi: f64) -> bool {
    lo <= v && v <= hi
}

/// Returns the class index (0 = group A) for function `1..=10`.
pub(crate) fn agrawal_label(function: usize, a: &Applicant) -> usize {
    let group_a = match function {
        1 => a.age < 40.0 || a.age >= 60.0,
        2 => {
            if a.age < 40.0 {
                within(a.salary, 50_000.0, 100_000.0)
            } else if a.age < 60.0 {
                within(a.salary, 75_000.0, 125_000.0)
            } else {
                within(a.salary, 25_000.0, 75_000.0)
            }
        }
        3 => {
            if a.age < 40.0 {
                a.elevel == 0 || a.elevel == 1
            } else if a.age < 60.0 {
                (1..=3).contains(&a.elevel)
            } else {
                (2..=4).contains(&a.elevel)
            }
        }
        4 => {
            if a.age < 40.0 {
                if a.elevel == 0 || a.elevel == 1 {
                    within(a.salary, 25_000.0, 75_000.0)
                } else {
                    within(a.salary, 50_000.0, 100_000.0)
                }
            } else if a.age < 60.0 {
                if (1..=3).contains(&a.elevel) {
                    within(a.salary, 50_000.0, 100_000.0)
                } else {
                    within(a.salary, 75_000.0, 125_000.0)
                }
            } else if (2..=4).contains(&a.elevel) {
                within(a.salary, 50_000.0, 100_000.0)
            } else {
                within(a.salary, 25_000.0, 75_000.0)
            }
        }
        5 => {
            if a.age < 40.0 {
                if within(a.salary, 50_000.0, 100_000.0) {
                    within(a.loan, 100_000.0, 300_000.0)
                } else {
                    within(a.loan, 200_000.0, 400_000.0)
                }
            } else if a.age < 60.0 {
                if within(a.salary, 75_000.0, 125_000.0) {
                    within(a.loan, 200_000.0, 400_000.0)
                } else {
                    within(a.loan, 300_000.0, 500_000.0)
                }
            } else if within(a.salary, 25_000.0, 75_000.0) {
                within(a.loan, 300_000.0, 500_000.0)
            } else {
                within(a.loan, 100_000.0, 300_000.0)
            }
        }
        6 => {
            let total = a.salary + a.commission;
            if a.age < 40.0 {
                within(total, 50_000.0, 100_000.0)
            } else if a.age < 60.0 {
                within(total, 75_000.0, 125_000.0)
            } else {
                within(total, 25_000.0, 75_000.0)
            }
        }
        7 => 2.0 * (a.salary + a.commission) / 3.0 - a.loan / 5.0 - 20_000.0 > 0.0,
        8 => 2.0 * (a.salary + a.commission) / 3.0 - 5_000.0 * a.elevel as f64 - 20_000.0 > 0.0,
        9 => {
            2.0 * (a.salary + a.commission) / 3.0 - 5_000.0 * a.elevel as f64 - a.loan / 5.0 - 10_000.0 > 0.0
        }
        10 => {
            let equity = if a.hyears >= 20.0 {
                a.hvalue * (a.hyears - 20.0) / 10.0
            } else {
                0.0
            };
            2.0 * (a.salary + a.commission) / 3.0 - 5_000.0 * a.elevel as f64 + equity / 5.0 - 10_000.0 > 0.0
        }
        _ => unreachable!("function validated to 1..=10"),
    };
    if group_a {
        0
    } else {
        1
    }
}

pub(crate) struct Agrawal {
    params: AgrawalParams,
    schema: StreamSchema,
    rng: Rng,
}

impl Agrawal {
    pub(crate) fn new(params: AgrawalParams, seed: u64) -> Self {
        let coded = |name: &str, prefix: &str, n: usize| {
            if params.nominal {
                Feature::nominal(name, numbered(prefix, n))
            } else {
                Feature::numeric(name)
            }
        };
        let schema = StreamSchema::new(
            "AGRAWAL",
            vec![
                Feature::numeric("salary"),
                Feature::numeric("commission"),
                Feature::numeric("age"),
                coded("elevel", "level", 5),
                coded("car", "car", 20),
                coded("zipcode", "zipcode", 9),
                Feature::numeric("hvalue"),
                Feature::numeric("hyears"),
                Feature::numeric("loan"),
            ],
            vec!["groupA".into(), "groupB".into()],
        )
        .expect("static schema");
        Agrawal {
            params,
            schema,
            rng: seeded(seed),
        }
    }

    pub(crate) fn sample_applicant(rng: &mut Rng) -> Applicant {
        let salary = 20_000.0 + 130_000.0 * rng.random::<f64>();
        let commission = if salary >= 75_000.0 {
            0.0
        } else {
            10_000.0 + 65_000.0 * rng.random::<f64>()
        };
        let age = rng.random_range(20..=80) as f64;
        let elevel = rng.random_range(0..5);
        let car = rng.random_range(0..20);
        let zipcode = rng.random_range(0..9);
        let hvalue = (9.0 - zipcode as f64) * 100_000.0 * (0.5 + rng.random::<f64>());
        let hyears = rng.random_range(1..=30) as f64;
        let loan = 500_000.0 * rng.random::<f64>();
        Applicant {
            salary,
            commission,
            age,
            elevel,
            car,
            zipcode,
            hvalue,
            hyears,
            loan,
        }
    }

    fn perturb(&mut self, value: f64, range: f64, min: f64, max: f64) -> f64 {
        let shifted = value + range * 2.0 * (self.rng.random::<f64>() - 0.5) * self.params.perturbation;
        shifted.clamp(min, max)
    }
}

impl Concept for Agrawal {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn draw(&mut self) -> Instance {
        let mut a = Self::sample_applicant(&mut self.rng);
        let y = agrawal_label(self.params.function, &a);
        if self.params.perturbation > 0.0 {
            a.salary = self.perturb(a.salary, 130_000.0, 20_000.0, 150_000.0);
            a.commission = self.perturb(a.commission, 65_000.0, 0.0, 75_000.0);
            a.age = self.perturb(a.age, 60.0, 20.0, 80.0).round();
            let base = (9.0 - a.zipcode as f64) * 100_000.0;
            a.hvalue = self.perturb(a.hvalue, base, 0.0, 1_350_000.0);
            a.hyears = self.perturb(a.hyears, 29.0, 1.0, 30.0).round();
            a.loan = self.perturb(a.loan, 500_000.0, 0.0, 500_000.0);
        }
        let x = vec![
            a.salary,
            a.commission,
            a.age,
            a.elevel as f64,
            a.car as f64,
            a.zipcode as f64,
            a.hvalue,
            a.hyears,
            a.loan,
        ];
        Instance::labeled(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_one_by_age() {
        let mut a = Agrawal::sample_applicant(&mut seeded(1));
        a.age = 30.0;
        assert_eq!(agrawal_label(1, &a), 0);
        a.age = 45.0;
        assert_eq!(agrawal_label(1, &a), 1);
        a.age = 60.0;
        assert_eq!(agrawal_label(1, &a), 0);
    }

    #[test]
    fn both_classes_occur_for_every_function() {
        let mut rng = seeded(9);
        for f in 1..=10 {
            let mut counts = [0usize; 2];
            for _ in 0..2000 {
                counts[agrawal_label(f, &Agrawal::sample_applicant(&mut rng))] += 1;
            }
            assert!(counts[0] > 0 && counts[1] > 0, "function {f}: {counts:?}");
        }
    }

    #[test]
    fn categorical_encoding() {
        let kinds = |nominal| {
            let g = Agrawal::new(AgrawalParams { nominal, ..AgrawalParams::default() }, 1);
            g.schema().features().iter().map(|f| f.kind.arity()).collect::<Vec<_>>()
        };
        assert_eq!(kinds(false), vec![None; 9]);
        assert_eq!(kinds(true)[3..6], [Some(5), Some(20), Some(9)]);
    }
}
