#!/usr/bin/env python3
"""Independent high-precision oracle for the frozen constants in the C++ tests.

Everything here is computed from the model primitives alone (mpmath special
functions, numerical differentiation, adaptive quadrature) and never touches
the C++ code paths under test.  Run it to regenerate the constants that the
acceptance suite asserts against:

    python3 tests/oracle/reference_values.py
"""

from mpmath import mp, mpf, sqrt, exp, pi, erfc, quad, findroot, betainc, diff, beta as beta_fn

mp.dps = 40


class TruncNorm:
    """Normal(mean, sd^2) truncated to [0,1]."""

    def __init__(self, mean, sd):
        self.m, self.s = mpf(mean), mpf(sd)
        self.zlo = (0 - self.m) / self.s
        self.zhi = (1 - self.m) / self.s
        self.Z = self._Phi(self.zhi) - self._Phi(self.zlo)

    @staticmethod
    def _Phi(z):
        return erfc(-z / sqrt(2)) / 2

    @staticmethod
    def _phi(z):
        return exp(-z * z / 2) / sqrt(2 * pi)

    def F(self, v):
        z = (v - self.m) / self.s
        return (self._Phi(z) - self._Phi(self.zlo)) / self.Z

    def S(self, v):
        z = (v - self.m) / self.s
        return (self._Phi(self.zhi) - self._Phi(z)) / self.Z

    def f(self, v):
        z = (v - self.m) / self.s
        return self._phi(z) / (self.s * self.Z)


class Beta:
    def __init__(self, a, b):
        self.a, self.b = mpf(a), mpf(b)

    def F(self, v):
        return betainc(self.a, self.b, 0, v, regularized=True)

    def S(self, v):
        return betainc(self.a, self.b, v, 1, regularized=True)

    def f(self, v):
        return v ** (self.a - 1) * (1 - v) ** (self.b - 1) / beta_fn(self.a, self.b)


class Uniform:
    def F(self, v):
        return mpf(v)

    def S(self, v):
        return 1 - mpf(v)

    def f(self, v):
        return mpf(1)


def r(d, v):
    return d.S(v) / d.f(v)


def psi(d, v):
    return v - r(d, v)


def buyer_lhs(d, v):
    rv = lambda t: r(d, t)
    return r(d, v) * diff(rv, v, 2) + diff(rv, v, 1)


def total_rhs(d, v):
    return 1 + (1 - diff(lambda t: r(d, t), v, 1)) ** 2


def pbar(d, q, c):
    """Unique root of psi(v) = c/q on the region where psi > 0."""
    target = mpf(c) / mpf(q)
    g = lambda v: psi(d, v) - target
    lo, hi = mpf("1e-6"), mpf(1) - mpf("1e-9")
    n = 4096
    prev_v, prev_g = lo, g(lo)
    for i in range(1, n + 1):
        v = lo + (hi - lo) * i / n
        gv = g(v)
        if prev_g < 0 and gv >= 0:
            return findroot(g, (prev_v, v), solver="bisect", tol=mpf("1e-35"))
        prev_v, prev_g = v, gv
    raise RuntimeError("no bracket for pbar")


def revenue(d, q, c):
    pb = pbar(d, q, c)
    return (pb * q - c) * d.S(pb)


def consumer_surplus(d, q, c):
    pb = pbar(d, q, c)
    p = pb * q
    return quad(lambda v: (v * q - p) * d.f(v), [pb, 1])


def total_surplus(d, q, c):
    pb = pbar(d, q, c)
    return quad(lambda v: (v * q - c) * d.f(v), [pb, 1])


def compute_k(d, scan=6000, lo="0.01", hi="0.9999"):
    """sup of the violation set {psi>0, buyer_lhs>1}; k = 1/psi at that point."""
    lo, hi = mpf(lo), mpf(hi)
    viol = lambda v: buyer_lhs(d, v) - 1
    last_bad = None
    prev_v = None
    for i in range(scan + 1):
        v = lo + (hi - lo) * i / scan
        if psi(d, v) > 0 and viol(v) > 0:
            last_bad = v
        prev_v = v
    if last_bad is None:
        return None, None
    step = (hi - lo) / scan
    v_dag = findroot(viol, (last_bad, last_bad + step), solver="bisect", tol=mpf("1e-30"))
    return 1 / psi(d, v_dag), v_dag


def show(name, val):
    print(f"{name} = {mp.nstr(val, 20)}")


def main():
    print("== spot values ==")
    b33 = Beta(3, 3)
    show("beta33.r(0.4)", r(b33, mpf("0.4")))
    show("beta33.psi(0.4)", psi(b33, mpf("0.4")))
    show("beta33.buyer_lhs(0.4)", buyer_lhs(b33, mpf("0.4")))
    show("beta22.psi_root", (1 + sqrt(33)) / 16)
    b22 = Beta(2, 2)
    show("beta22.r(0.5)", r(b22, mpf("0.5")))
    show("beta22.buyer_lhs(0.5)", buyer_lhs(b22, mpf("0.5")))

    print("== k thresholds ==")
    for name, d in [("beta33", b33), ("tn_0.5_0.1", TruncNorm("0.5", "0.1"))]:
        k, v_dag = compute_k(d)
        show(f"k[{name}]", k)
        show(f"v_dagger[{name}]", v_dag)
    for name, d in [
        ("uniform", Uniform()),
        ("beta_1_0.5", Beta(1, "0.5")),
        ("beta_1_2", Beta(1, 2)),
        ("beta22", b22),
        ("tn_0.5_sqrt0.1", TruncNorm("0.5", sqrt(mpf("0.1")))),
    ]:
        k, _ = compute_k(d)
        print(f"k[{name}] = {'inf (no violation found)' if k is None else mp.nstr(k, 20)}")

    print("== peaked truncated normal, c=1 ==")
    tn = TruncNorm("0.5", sqrt(mpf("0.001")))
    for q in [2, 4, 5, 20, mpf("12.5")]:
        show(f"tn_peaked.pbar({q})", pbar(tn, q, 1))
    for q in [5, 20, mpf("12.5")]:
        show(f"tn_peaked.rev({q})", revenue(tn, q, 1))
        show(f"tn_peaked.cs({q})", consumer_surplus(tn, q, 1))
        show(f"tn_peaked.ts({q})", total_surplus(tn, q, 1))
    cs_full = (consumer_surplus(tn, 5, 1) + consumer_surplus(tn, 20, 1)) / 2
    ts_full = (total_surplus(tn, 5, 1) + total_surplus(tn, 20, 1)) / 2
    show("tn_peaked.e_cs_full_5_20", cs_full)
    show("tn_peaked.e_cs_pooled_12.5", consumer_surplus(tn, mpf("12.5"), 1))
    show("tn_peaked.e_ts_full_5_20", ts_full)
    show("tn_peaked.e_ts_pooled_12.5", total_surplus(tn, mpf("12.5"), 1))

    print("== total-payoff condition margins on the two intervals ==")
    for (qlo, qhi) in [(2, 4), (5, 20)]:
        a, b = pbar(tn, qhi, 1), pbar(tn, qlo, 1)
        worst = None
        for i in range(1, 200):
            v = a + (b - a) * i / 200
            m = buyer_lhs(tn, v) - total_rhs(tn, v)
            worst = m if worst is None else max(worst, m)
        print(f"Q=[{qlo},{qhi}]: max(lhs - total_rhs) = {mp.nstr(worst, 10)}")

    print("== beta(2,2) pricing spot, c=1 q=2 ==")
    for q in [2, 4]:
        show(f"beta22.pbar({q})", pbar(b22, q, 1))
        show(f"beta22.rev({q})", revenue(b22, q, 1))
        show(f"beta22.cs({q})", consumer_surplus(b22, q, 1))
        show(f"beta22.ts({q})", total_surplus(b22, q, 1))

    print("== r'' sign survey (price direction) ==")
    for name, d, qlo, qhi in [
        ("beta22 c=1 Q=[2,6]", b22, 2, 6),
        ("beta33 c=1 Q=[2,6]", b33, 2, 6),
        ("tn_0.5_0.1 c=1 Q=[1.5,2.5]", TruncNorm("0.5", "0.1"), mpf("1.5"), mpf("2.5")),
        ("tn_0.5_sqrt0.1 c=1 Q=[2,6]", TruncNorm("0.5", sqrt(mpf("0.1"))), 2, 6),
    ]:
        a, b = pbar(d, qhi, 1), pbar(d, qlo, 1)
        signs = set()
        for i in range(1, 100):
            v = a + (b - a) * i / 100
            r2 = diff(lambda t: r(d, t), v, 2)
            signs.add(1 if r2 > mpf("1e-12") else (-1 if r2 < mpf("-1e-12") else 0))
        mx = max(buyer_lhs(d, a + (b - a) * i / 100) for i in range(1, 100))
        print(f"{name}: interval=({mp.nstr(a,8)},{mp.nstr(b,8)}) r'' signs={sorted(signs)} max buyer_lhs={mp.nstr(mx, 8)}")


if __name__ == "__main__":
    main()
