pub mod error;
pub mod likelihood;
pub mod linalg;
pub mod mltable;
pub mod models;
pub mod poly;
pub mod random;
pub mod solver;
pub mod tracker;

pub use error::{Error, Result};
