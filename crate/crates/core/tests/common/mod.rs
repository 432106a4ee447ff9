//! Fixtures and oracles shared by the property tests, the Context II tests
//! and the acceptance harness.
#![allow(dead_code)]

pub mod cauchy;
pub mod instances;
