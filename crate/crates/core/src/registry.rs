//! Interchangeable ways of computing a coefficient of the Euler generating
//! function, selectable by name.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::ce_cohomology::super_euler_at_weight;
use crate::error::{Error, Result};
use crate::euler_series::{borel_coefficient_formula, euler_series};
use crate::lie_superalgebra::build_nilradical;
use crate::root_data::{ParabolicShape, Weight, WeightBox};

pub trait EulerStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    /// Coefficient of `s^lambda` (bookkeeping weight).
    fn coefficient(&self, shape: &ParabolicShape, lambda: &[i64]) -> Result<i64>;

    /// Every coefficient in `bounds`, zeros included.
    fn coefficients(&self, shape: &ParabolicShape, bounds: &WeightBox) -> Result<BTreeMap<Weight, i64>> {
        bounds.points().into_iter().map(|w| Ok((w.clone(), self.coefficient(shape, &w)?))).collect()
    }
}

/// Signed count of cochains, from the Chevalley-Eilenberg complex.
struct Cochains;

impl EulerStrategy for Cochains {
    fn name(&self) -> &'static str {
        "ce"
    }

    fn describe(&self) -> &'static str {
        "parity-signed count of cochain monomials of the nilradical"
    }

    fn coefficient(&self, shape: &ParabolicShape, lambda: &[i64]) -> Result<i64> {
        super_euler_at_weight(&build_nilradical(shape), lambda)
    }

    fn coefficients(&self, shape: &ParabolicShape, bounds: &WeightBox) -> Result<BTreeMap<Weight, i64>> {
        let alg = build_nilradical(shape);
        bounds.points().into_par_iter().map(|w| Ok((w.clone(), super_euler_at_weight(&alg, &w)?))).collect()
    }
}

/// Laurent expansion of the product formula in the shape's region.
struct Expansion;

impl EulerStrategy for Expansion {
    fn name(&self) -> &'static str {
        "expansion"
    }

    fn describe(&self) -> &'static str {
        "Laurent expansion of the rational product in the convergence region"
    }

    fn coefficient(&self, shape: &ParabolicShape, lambda: &[i64]) -> Result<i64> {
        let point = WeightBox { lo: lambda.to_vec(), hi: lambda.to_vec() };
        Ok(self.coefficients(shape, &point)?.remove(lambda).unwrap_or(0))
    }

    fn coefficients(&self, shape: &ParabolicShape, bounds: &WeightBox) -> Result<BTreeMap<Weight, i64>> {
        let table = euler_series(shape, bounds)?;
        bounds
            .points()
            .into_iter()
            .map(|w| {
                let c = table.coefficient(&w).unwrap_or_default();
                let c = c.to_i64().ok_or_else(|| Error::Unsupported(format!("coefficient at {w:?} exceeds 64 bits")))?;
                Ok((w, c))
            })
            .collect()
    }
}

/// Closed sector formula; Borel shapes only.
struct Formula;

impl EulerStrategy for Formula {
    fn name(&self) -> &'static str {
        "formula"
    }

    fn describe(&self) -> &'static str {
        "signed sum over crossing sectors (Borel shapes)"
    }

    fn coefficient(&self, shape: &ParabolicShape, lambda: &[i64]) -> Result<i64> {
        if !shape.is_borel() {
            return Err(Error::Unsupported(format!("the sector formula needs a Borel shape, got {}", shape.shape_text())));
        }
        Ok(borel_coefficient_formula(shape.shuffle(), lambda)?.value)
    }
}

pub fn strategies() -> Vec<Box<dyn EulerStrategy>> {
    vec![Box::new(Cochains), Box::new(Expansion), Box::new(Formula)]
}

pub fn strategy(name: &str) -> Result<Box<dyn EulerStrategy>> {
    strategies().into_iter().find(|s| s.name() == name).ok_or_else(|| {
        let known: Vec<&str> = strategies().iter().map(|s| s.name()).collect();
        Error::Parse(format!("unknown strategy `{name}`; expected one of {known:?}"))
    })
}
