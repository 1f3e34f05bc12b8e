# Independent measurement of the GL strong-order experiment at the
# acceptance parameters, using numpy's own RNG (no shared code with the
# C++ implementation).  Settles what the honest fitted slopes are.
import numpy as np


def psi(r):
    out = np.where(r >= 2.0, r, 0.0)
    mid = (r > 1.0) & (r < 2.0)
    rm = r[mid]
    e1 = np.exp(-1.0 / (rm - 1.0))
    e2 = np.exp(-1.0 / (2.0 - rm))
    out[mid] = rm * (e1 / (e1 + e2))
    return out


def drift(x):
    return -(x**3 + 1.875 * x)


def sigma(x):
    return 0.5 * x


def tame_mod(b, scale):
    r = scale * np.abs(b)
    return b / (1.0 + psi(r))


def tame_classic(b, scale):
    return b / (1.0 + scale * np.abs(b))


def run(seed=0, M=10000, k_ref=13, levels=(5, 6, 7, 8, 9), T=1.0, gamma=1.0,
        chunk=2000):
    rng = np.random.default_rng(seed)
    n_ref = 2 ** k_ref
    h_ref = T / n_ref
    acc = {lev: {s: [] for s in ("em", "te", "mte", "rbm")} for lev in levels}
    wacc = {lev: {s: [] for s in ("em", "te", "mte", "rbm")} for lev in levels}
    for start in range(0, M, chunk):
        m = min(chunk, M - start)
        dW = rng.standard_normal((m, n_ref)) * np.sqrt(h_ref)
        # reference: mte on the fine grid
        x = np.ones(m)
        sc_ref = gamma * np.sqrt(h_ref)
        for j in range(n_ref):
            b = drift(x)
            x = x + h_ref * tame_mod(b, sc_ref) + sigma(x) * dW[:, j]
        xref = x
        for lev in levels:
            n = 2 ** lev
            h = T / n
            dWc = dW.reshape(m, n, n_ref // n).sum(axis=2)
            sc = gamma * np.sqrt(h)
            xs = {s: np.ones(m) for s in ("em", "te", "mte", "rbm")}
            for j in range(n):
                for s in ("em", "te", "mte", "rbm"):
                    xx = xs[s]
                    if s == "rbm":
                        xi = rng.integers(0, 2, size=m)
                        b = np.where(xi == 0, 2.0 * (-xx**3), 2.0 * (-1.875 * xx))
                        beff = tame_mod(b, sc)
                    elif s == "mte":
                        beff = tame_mod(drift(xx), sc)
                    elif s == "te":
                        beff = tame_classic(drift(xx), sc)
                    else:
                        beff = drift(xx)
                    xs[s] = xx + h * beff + sigma(xx) * dWc[:, j]
            for s in ("em", "te", "mte", "rbm"):
                acc[lev][s].append(np.square(xs[s] - xref))
                wacc[lev][s].append(np.cos(xref) - np.cos(xs[s]))
    print(f"{'scheme':8s} {'kind':7s} " + " ".join(f"l={l}" for l in levels) + "  slope")
    for s in ("em", "te", "mte", "rbm"):
        errs = [np.sqrt(np.mean(np.concatenate(acc[l][s]))) for l in levels]
        lh = np.log2([T / 2 ** l for l in levels])
        le = np.log2(errs)
        slope = np.polyfit(lh, le, 1)[0]
        print(f"{s:8s} strong  " + " ".join(f"{e:.3e}" for e in errs) + f"  {slope:.4f}")
        werrs = [abs(np.mean(np.concatenate(wacc[l][s]))) for l in levels]
        wslope = np.polyfit(lh, np.log2(werrs), 1)[0]
        print(f"{s:8s} weak    " + " ".join(f"{e:.3e}" for e in werrs) + f"  {wslope:.4f}")


if __name__ == "__main__":
    import sys
    kw = {}
    for a in sys.argv[1:]:
        k, v = a.split("=")
        kw[k] = float(v) if "." in v else int(v)
    run(**kw)
