"""Independent symbolic cross-check of the closed-form system.

Recomputes the frozen expected values used by the Rust test suite with sympy.
Run: python3 tools/sympy_oracle.py
"""
import sympy as sp

x, y, z, px, py, pz, a, b, w0 = sp.symbols("x y z px py pz a b w0")
Q = (x, y, z)
P = (px, py, pz)

u = ((a - 1)**2 * x**4 + (a*z**2 + y**2)**2 + 2*(1 - a)*x**2*(y**2 - a*z**2)
     + 6*a*b*(a - 1)*(3*((x**2 - z**2)*a - x**2 + y**2)*b - 4*x*y*z)
     + 81*a**2*(1 - a)**2*b**4)
u = sp.expand(u)


def angular(ly_literal=False):
    lx = y*pz - z*py
    ly = (z*py - x*pz) if ly_literal else (z*px - x*pz)
    lz = x*py - y*px
    return lx, ly, lz


def system(ly_literal=False):
    lx, ly, lz = angular(ly_literal)
    V = w0 / sp.sqrt(u)
    L1 = (lx**2 + ly**2 + lz**2 + 2*b*(lx*px - (3*a - 1)*ly*py - 2*lz*pz)
          + 3*b**2*((1 - 4*a)*px**2 - (3*a**2 - 2*a - 1)*py**2 + 2*(a - 1)*pz**2))
    L2 = a*ly**2 + lz**2 + 6*a*b*lx*px + 9*a*b**2*(a*pz**2 + py**2)
    m1 = 2*w0*(x**2 + y**2 + z**2 + 3*b**2*(1 - a)) / sp.sqrt(u)
    m2 = w0*(x**2 + y**2 + a*(x**2 + z**2) + 9*a*b**2*(a + 1)) / sp.sqrt(u)
    H = (px**2 + py**2 + pz**2) / 2 + V
    return H, L1 + m1, L2 + m2, V, m1, m2, L1, L2


def pb(F, G):
    return sum(sp.diff(F, q)*sp.diff(G, p) - sp.diff(F, p)*sp.diff(G, q) for q, p in zip(Q, P))


def zero_check(expr):
    # multiply through by u^(5/2) and simplify sqrt(u) -> s
    s = sp.Symbol("s")
    e = sp.together(sp.expand(expr))
    num, _ = sp.fraction(e)
    num = sp.expand(num)
    return sp.simplify(num) == 0


def numeric_zero(expr, trials=5):
    import random
    rng = random.Random(1)
    worst = 0.0
    for _ in range(trials):
        sub = {x: rng.uniform(-2, 2), y: rng.uniform(-2, 2), z: rng.uniform(-2, 2),
               px: rng.uniform(-1, 1), py: rng.uniform(-1, 1), pz: rng.uniform(-1, 1),
               a: rng.uniform(0.05, 0.5), b: rng.uniform(0.3, 2), w0: rng.uniform(-2, 2)}
        val = sp.N(expr.subs(sub), 30)
        worst = max(worst, abs(float(val)))
    return worst


if __name__ == "__main__":
    H, X1, X2, V, m1, m2, L1, L2 = system()
    print("dy u, y^3 coefficient:", sp.Poly(sp.diff(u, y), x, y, z).coeff_monomial(y**3))
    print("u(0):", sp.factor(u.subs({x: 0, y: 0, z: 0})))
    print("u(0) a=1/4,b=1:", u.subs({x: 0, y: 0, z: 0, a: sp.Rational(1, 4), b: 1}))
    for name, F, G in (("H,X1", H, X1), ("H,X2", H, X2), ("X1,X2", X1, X2)):
        print("{%s} max |residual| at random points:" % name, numeric_zero(pb(F, G)))
    Hl, X1l, X2l, *_ = system(True)
    for name, F, G in (("H,X1", Hl, X1l), ("H,X2", Hl, X2l), ("X1,X2", X1l, X2l)):
        print("literal {%s}:" % name, numeric_zero(pb(F, G)))
    N1 = (1 - a)*(9*a*(a - 1)*b**2*x - 6*a*b*y*z + a*x*(x**2 + z**2) - x*(x**2 + y**2))
    D1 = a*(9*(a - 1)*a*b**2*z + 6*a*b*x*y - a*z*(x**2 + z**2) - 6*b*x*y + z*(x**2 - y**2))
    N2 = -(9*a*(a - 1)*b**2*y + 6*a*(1 - a)*b*x*z + a*y*(z**2 - x**2) + y*(x**2 + y**2))
    D2 = a*(9*a*(a - 1)*b**2*z + 6*(a - 1)*b*x*y - a*z*(x**2 + z**2) + z*(x**2 - y**2))
    print("D1*ux - N1*uz:", sp.expand(D1*sp.diff(u, x) - N1*sp.diff(u, z)))
    print("D2*uy - N2*uz:", sp.expand(D2*sp.diff(u, y) - N2*sp.diff(u, z)))
    print("N2 y^3 coefficient:", sp.Poly(N2, x, y, z).coeff_monomial(y**3))
    print("D1 at x=y=0:", sp.factor(D1.subs({x: 0, y: 0})))
    # Killing tensors
    def kt(L):
        K = sp.zeros(3, 3)
        for i in range(3):
            for j in range(3):
                c = sp.diff(L, P[i], P[j])
                K[i, j] = sp.expand(c / 2)
        return K
    K1, K2 = kt(L1), kt(L2)
    print("K2_zz:", K2[2, 2])
    C = sp.expand(K1*K2 - K2*K1)
    print("commutator nonzero entries:", sum(1 for e in C if e != 0))
    J = sp.Matrix([[sp.diff(F, p) for p in P] for F in ((px**2 + py**2 + pz**2)/2, L1, L2)])
    det = sp.expand(J.det())
    print("det terms:", len(sp.Add.make_args(det)))
    # ode
    uu = sp.Symbol("u", positive=True)
    v = uu**sp.Rational(-1, 2)
    print("ode residual:", sp.simplify(2*uu*sp.diff(v, uu, 2) + 3*sp.diff(v, uu)))
    # factorization at a=9/25
    ra, rb = sp.Rational(3, 5), sp.Rational(4, 5)
    prod = 1
    for e1 in (1, -1):
        for e2 in (1, -1):
            prod *= e1*rb*sp.I*x + e1*e2*y + e2*ra*sp.I*z - 3*ra*rb*b
    print("factorization residual a=9/25:", sp.expand(prod - u.subs(a, sp.Rational(9, 25))))
    # first-order scan at a=1/4, b=1
    for (av, bv) in ((sp.Rational(1, 4), 1), (sp.Rational(9, 25), 1)):
        us = u.subs({a: av, b: bv})
        grad = [sp.diff(us, q) for q in Q]
        al = sp.symbols("al0:3"); be = sp.symbols("be0:3")
        r = (x, y, z)
        cross = [be[1]*r[2] - be[2]*r[1], be[2]*r[0] - be[0]*r[2], be[0]*r[1] - be[1]*r[0]]
        cond = sp.expand(sum((al[i] + cross[i])*grad[i] for i in range(3)))
        eqs = sp.Poly(cond, x, y, z).coeffs()
        M = sp.Matrix([[sp.diff(e, c) for c in al + be] for e in eqs])
        print("scan rank at", av, bv, ":", M.rank())
    # m1 at origin
    print("m1(0):", sp.simplify(m1.subs({x: 0, y: 0, z: 0, b: 1})))
    print("m2(0) a=1/4 b=1 w0=-1:", sp.nsimplify(m2.subs({x: 0, y: 0, z: 0, a: sp.Rational(1, 4), b: 1, w0: -1})))
