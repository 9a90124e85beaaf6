pub mod asymptotics;
pub mod bound;
pub mod cli;
pub mod constellation;
pub mod error;
pub mod fading;
pub mod montecarlo;
pub mod mutual_info;
pub mod stream;
