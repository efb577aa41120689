//! Minimax risk classifiers learned by linear programming.
//!
//! A classifier is learned from interval estimates `a <= E[Phi(x, y)] <= b`
//! of a binary feature map: the minimax rule over every distribution
//! consistent with the estimates is obtained from one linear program, and
//! its optimal value upper-bounds the expected 0-1 loss. A second program
//! gives a matching lower bound.
//!
//! The numerical core ([`lp`], [`learn`], [`predict`]) is generic over
//! [`num::Scalar`]; the aliases below fix it to `f64`, and [`single`] to `f32`.
//!
//! ```no_run
//! use mrc::data::{load_csv, CsvOptions};
//! use mrc::train::{train, TrainOptions};
//!
//! let data = load_csv("haberman.csv", &CsvOptions::default())?;
//! let model: mrc::MrcModel = train(&data, &TrainOptions::default())?;
//! println!("risk <= {}", model.upper_bound);
//! # Ok::<(), mrc::Error>(())
//! ```

pub mod cli;
pub mod data;
pub mod error;
pub mod estimates;
pub mod eval;
pub mod features;
pub mod learn;
pub mod lp;
pub mod model_file;
pub mod num;
pub mod predict;
pub mod stumps;
pub mod train;

pub use error::{Error, Result};

pub type LinearProgram = lp::LinearProgram<f64>;
pub type LpSolution = lp::LpSolution<f64>;
pub type InstanceMatrix = features::InstanceMatrix<f64>;
pub type ExpectationEstimates = estimates::ExpectationEstimates<f64>;
pub type MrcModel = learn::MrcModel<f64>;
pub type Prediction = predict::Prediction<f64>;

/// Single-precision aliases.
pub mod single {
    pub type LinearProgram = crate::lp::LinearProgram<f32>;
    pub type LpSolution = crate::lp::LpSolution<f32>;
    pub type InstanceMatrix = crate::features::InstanceMatrix<f32>;
    pub type ExpectationEstimates = crate::estimates::ExpectationEstimates<f32>;
    pub type MrcModel = crate::learn::MrcModel<f32>;
    pub type Prediction = crate::predict::Prediction<f32>;
}
