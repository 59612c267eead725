pub mod frobenius;
pub mod heun;
pub mod ode;
pub mod polymer;
pub mod polyrat;
pub mod transform;
