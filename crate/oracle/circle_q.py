# Reference values for the circle model, computed at 30 digits.
# q_k = 2*pi * int_0^{2pi} G_r(2|sin(th/2)|) cos(k th) dth,  G_r(r) = (exp(-sqrt(lam) r) - 1)/(4 pi r)
# norm_half = (pi/lam) * int_0^inf J_k(r)^2 (1 - r/sqrt(r^2+lam)) dr
import mpmath as mp
mp.mp.dps = 30

def lit(v):
    s = str(v)
    return s if any(c in s for c in ".e") else s + ".0"

def q(k, lam):
    s = mp.sqrt(lam)
    def f(th):
        r = 2*mp.sin(th/2)
        if r == 0:
            g = -s/(4*mp.pi)
        else:
            g = (mp.exp(-s*r) - 1)/(4*mp.pi*r)
        return g*mp.cos(k*th)
    return 2*mp.pi*mp.quad(f, [0, mp.pi, 2*mp.pi])

def norm_half(k, lam):
    f = lambda r: mp.besselj(k, r)**2 * (1 - r/mp.sqrt(r*r+lam))
    return (mp.pi/lam)*mp.quadosc(f, [0, mp.inf], period=mp.pi)

if __name__ == "__main__":
    for lam in ["0.5", "1", "4"]:
        L = mp.mpf(lam)
        for k in range(0, 9):
            qq = q(k, L)
            print(lam, k, mp.nstr(qq, 20), mp.nstr(-L*norm_half(k, L), 20))

def emit_rust():
    print("// (lambda, k, q_k) from the circle-kernel route at 30 digits")
    print("pub const CIRCLE_Q_REFERENCE: &[(f64, u32, f64)] = &[")
    for lam in ["0.5", "1", "4"]:
        for k in range(0, 9):
            print(f"    ({lit(lam)}, {k}, {lit(mp.nstr(q(k, mp.mpf(lam)), 20))}),")
    print("];")
