/// Bessel function of the first kind, order zero.
///
/// Backed by the musl-derived `libm::j0` (rational approximations on
/// `|x| < 2`, Hankel asymptotics with rational P/Q corrections beyond), which
/// is accurate to a few ulp over the whole real line.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}
