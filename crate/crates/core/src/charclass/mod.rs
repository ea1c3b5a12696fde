//! Chern-class polynomial rings of quiver moduli and the characteristic-class
//! calculus behind the vertex algebra.

mod chern;
mod maps;
mod ring;

pub use chern::{
    atom_power_sums, chern_from_power_sums, chern_virtual, ext_kexpr, kexpr_power_sums,
    power_sums, theta_kexpr, top_chern, total_chern, Atom, KExpr, Taut,
};
pub use maps::{
    g_kexpr, g_top_class, phi_pullback, psi1, psi_coaction, psi_on_factor, psi_phi, psi_twice,
    sigma_pullback,
};
pub use ring::{int_poly, zseries_mul, Gen, Mono, Poly, Ring, RingMap, ZRingMap, ZSeries};
