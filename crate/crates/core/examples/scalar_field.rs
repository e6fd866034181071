//! Exact arithmetic in Q(φ), φ² = φ + 1.

use num_rational::BigRational;
use ripslab::scalar::{NumberField, Poly, Scalar};

fn main() {
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    let field = NumberField::define(Poly::from_ints([-1, -1, 1]), one, two).expect("x^2 - x - 1 has a root in (1, 2]");
    let phi = Scalar::generator(&field);

    println!("phi      = {} ~ {}", phi, phi.to_decimal(12));
    println!("phi^2    = {}", &phi * &phi);
    println!("1/phi    = {}", Scalar::one() / phi.clone());
    println!("phi - 1  = {}", &phi - &Scalar::one());

    // 2φ - 3 is about 0.236, 13 - 8φ about 0.056
    let a = &(&phi + &phi) - &Scalar::from_ratio(3, 1);
    let b = &Scalar::from_ratio(13, 1) - &(&phi * &Scalar::from_ratio(8, 1));
    println!("2phi - 3 > 13 - 8phi: {}", a > b);
    println!("mixing rationals: {} ", &phi + &Scalar::from_ratio(1, 3));
}
