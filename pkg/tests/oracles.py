"""Reference values computed once with mpmath at 20-30 digits and frozen.

Periods: tanh-sinh quadrature of 2 int_e^inf dx/sqrt(f) (no substitution, no
AGM).  Fourier coefficient: piecewise quadrature over unit cells up to
x = 3000 plus an integration-by-parts tail.
"""

from fractions import Fraction

# (a, b, largest root e, omega, oval period or None)
PERIODS = [
    (0, -2, 1.2599210498948731648, 4.3273634980275014362, None),
    (0, 1, -1.0, 8.4130926319527255152, None),
    (-1, 1, -1.324717957244746026, 9.4141755224603708229, None),
    (-4, 4, -2.3829757679062374941, 8.505059066296719743, None),
    (0, 17, -2.5712815906582353555, 5.2466349808348272556, None),
    (-43, 166, -7.9865480504393910842, 4.3467574468433882272, None),
    (0, 3, -1.4422495703074083823, 7.0054407066853468667, None),
    (-3, 3, -2.1038034027355365332, 8.5261744760378831495, None),
    (1, 1, -0.68232780382801932737, 7.4998859561886855674, None),
    (0, 2, -1.2599210498948731648, 7.4952134414026163584, None),
    (1, 0, 0.0, 7.41629870920548761, None),
    (5, 0, 0.0, 4.9595778605903227808, None),
    (-4, 5, -2.4566783430441110871, 7.6889002323186371231, None),
    (Fraction(-1, 16), Fraction(1, 64), -0.33117948931118650649, 18.828351044920741679, None),
    (-1, 0, 1.0, 5.2441151085842395727, 5.2441151085842395869),
    (-2, 0, 1.4142135623730950488, 4.4097575959863305342, 4.4097575959863309191),
    (-4, 0, 2.0, 3.7081493546027437987, 3.7081493546027438128),
    (-7, 6, 2.0, 4.0378116399568463903, 4.0378116399568464023),
    (-10, 0, 3.162277660168379332, 2.9489826396119924986, 2.9489826396119923033),
    (-3, 1, 1.5320888862379560704, 4.3551028524751346211, 4.3551028524751352577),
]

# (2/omega) int_1^2 dx/sqrt(x^3 - x)
F2_X3_MINUS_X = 0.44551489018313123147

# (1/2)(2/omega_b) int_{-1}^{-1/2} dx/sqrt(|x^3 - x|)
MU_PLUS_SUB_X3_MINUS_X = 0.2227574450915656157

# c(1) = (2/omega) int_e^inf exp(2 pi i x)/sqrt(f) dx
C1_X3_MINUS_2 = complex(-0.108901726918531, 0.102364397505977)
C1_SCALED_DIP = complex(0.149835334186244313, -0.0209168298375551261)  # a=-1/16, b=1/64

# rational seeds of infinite order on corpus curves
SEEDS = {
    (0, -2): (3, 5),
    (-1, 1): (1, 1),
    (-4, 4): (1, 1),
    (0, 17): (-1, 4),
    (0, 3): (1, 2),
    (-3, 3): (1, 1),
    (0, 2): (-1, 1),
    (-2, 0): (2, 2),
}
