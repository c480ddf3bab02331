#![allow(dead_code)]

use ratsos::arith::parse::{parse_poly_with_vars, parse_unipoly};
use ratsos::arith::{NumberField, RatPoly};

pub const BINARY_QUARTIC: &str = "10*x^4+2*x^3*y+27*x^2*y^2-24*x*y^3+5*y^4";

pub const TERNARY_QUARTIC: &str = "10*x^4+6*x^3*y-22*x^3*z+39*x^2*y^2-24*x^2*y*z+33*x^2*z^2\
    -20*x*y^2*z+8*x*y*z^2-20*x*z^3+25*y^4+10*y^3*z+y^2*z^2+4*z^4";

pub const OCTIC: &str = "3618*x^8 + 468*x^7*y + 6504*x^7*z - 1104*x^6*y^2 \
    + 2616*x^6*y*z + 57481*x^6*z^2 - 144*x^5*y^3 - 1652*x^5*y^2*z \
    - 16440*x^5*y*z^2 + 23420*x^5*z^3 + 160*x^4*y^4 + 1392*x^4*y^3*z \
    - 2520*x^4*y^2*z^2 - 28448*x^4*y*z^3 + 91320*x^4*z^4 - 240*x^3*y^4*z \
    + 1728*x^3*y^3*z^2 + 10524*x^3*y^2*z^3 - 85500*x^3*y*z^4 \
    + 34740*x^3*z^5 - 3696*x^2*y^3*z^3 + 28920*x^2*y^2*z^4 \
    - 15192*x^2*y*z^5 - 57267*x^2*z^6 + 720*x*y^4*z^3 - 3312*x*y^3*z^4 \
    - 3168*x*y^2*z^5 + 26352*x*y*z^6 - 40176*x*z^7 + 720*y^4*z^4 \
    + 864*y^3*z^5 - 9072*y^2*z^6 + 46656*z^8";

pub const MOTZKIN: &str = "x^4*y^2 + x^2*y^4 - 3*x^2*y^2*z^2 + z^6";

pub const SCHEIDERER: &str = "x^4+x*y^3+y^4-3*x^2*y*z-4*x*y^2*z+2*x^2*z^2+x*z^3+y*z^3+z^4";

pub const SEXTIC: &str = "4*w^4*x^2+56*w^4*x*z+200*w^4*z^2-504*w^3*x^2*z-3696*w^3*x*z^2\
    -112*w^2*x^4-656*w^2*x^3*z-12*w^2*x^2*y^2+168*w^2*x^2*y*z+20008*w^2*x^2*z^2\
    -88*w^2*x*y^2*z+2352*w^2*x*y*z^2+11200*w^2*x*z^3\
    +8400*w^2*y*z^3+20000*w^2*z^4+16*w*x^4*y+7896*w*x^4*z+128*w*x^3*y*z-10752*w*x^3*z^2\
    +840*w*x^2*y^2*z-10328*w*x^2*y*z^2-76944*w*x^2*z^3\
    -77616*w*x*y*z^3-184800*w*x*z^4+932*x^6-1656*x^5*z+188*x^4*y^2-2352*x^4*y*z-10020*x^4*z^2\
    -256*x^3*y^2*z-13776*x^3*y*z^2+3520*x^3*z^3+10*x^2*y^4-252*x^2*y^3*z-68*x^2*y^2*z^2\
    +49728*x^2*y*z^3+175824*x^2*z^4-1848*x*y^3*z^2+20296*x*y^2*z^3\
    +235200*x*y*z^4+420000*x*z^5+88200*y^2*z^4+420000*y*z^5+500000*z^6";

pub const TWO_SQUARES_F: &str = "5*x^6+12*x^5*y+12*x^5*z+3*x^4*y^2+12*x^4*z^2-4*x^3*y^3-36*x^3*y^2*z\
    -36*x^3*y*z^2-4*x^3*z^3+3*x^2*y^4+12*x^2*z^4+12*x*y^3*z^2+12*x*y^2*z^3+y^6+4*z^6";

pub const TWO_SQUARES_P1: &str = "2*a^2*x^2*z-2*a^2*y*z^2+2*a*x^3-2*a*x*y*z-2*x^3+x^2*y-2*x*z^2+y^3";
pub const TWO_SQUARES_P2: &str = "2*a^2*x^3-2*a^2*x*y*z+2*a*x^2*y-2*a*y^2*z-x^3+2*x^2*z-x*y^2+2*z^3";

pub const CONJ_P1: &str = "-10*x^9-39*x^8*y-24*x^8*z-42*x^7*y^2-36*x^7*y*z+6*x^7*z^2+4*x^6*y^3+72*x^6*y^2*z+\
    108*x^6*y*z^2+80*x^6*z^3+18*x^5*y^4+120*x^5*y^3*z+126*x^5*y^2*z^2+12*x^5*y*z^3+48*x^5*z^4-\
    6*x^4*y^5-36*x^4*y^3*z^2-240*x^4*y^2*z^3-252*x^4*y*z^4-24*x^4*z^5-6*x^3*y^6-36*x^3*y^5*z-\
    54*x^3*y^4*z^2-40*x^3*y^3*z^3+64*x^3*z^6+84*x^2*y^3*z^4+72*x^2*y^2*z^5-12*x^2*y*z^6+\
    18*x*y^6*z^2+12*x*y^5*z^3+24*x*z^8+y^9+4*y^3*z^6";

pub const CONJ_P2: &str = "5*x^9+12*x^8*y+42*x^8*z-12*x^7*y^2+72*x^7*y*z+84*x^7*z^2-40*x^6*y^3-54*x^6*y^2*z-\
    36*x^6*y*z^2+58*x^6*z^3-6*x^5*y^4-24*x^5*y^3*z-252*x^5*y^2*z^2-240*x^5*y*z^3-36*x^5*z^4+\
    12*x^4*y^5+126*x^4*y^4*z+120*x^4*y^3*z^2+18*x^4*y^2*z^3+48*x^4*z^5-8*x^3*y^6+80*x^3*y^3*z^3+\
    108*x^3*y^2*z^4+72*x^3*y*z^5+12*x^3*z^6+6*x^2*y^6*z-36*x^2*y^5*z^2-42*x^2*y^4*z^3-3*x*y^8-\
    24*x*y^3*z^5-36*x*y^2*z^6-2*y^6*z^3-8*z^9";

pub const TWO_SQUARES_Q1: &str = "2*x^3+3*x^2*y-6*x*z^2-y^3";
pub const TWO_SQUARES_Q2: &str = "x^3+6*x^2*z-3*x*y^2-2*z^3";

pub fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn xyz(src: &str) -> RatPoly {
    parse_poly_with_vars(src, &vars(&["x", "y", "z"])).unwrap()
}

pub fn xyzw(src: &str) -> RatPoly {
    parse_poly_with_vars(src, &vars(&["x", "y", "z", "w"])).unwrap()
}

pub fn field(name: &str, minpoly: &str) -> NumberField {
    NumberField::new(name, parse_unipoly(minpoly, "Z").unwrap()).unwrap()
}
