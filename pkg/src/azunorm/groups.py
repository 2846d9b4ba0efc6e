"""Unit, unitary and special groups; reduced-norm images; functor values.

Quotients of finite abelian unit groups are represented by an explicit coset
decomposition plus an elementary-divisor list.  No generic group-theory
engine: everything here is enumeration over small finite rings.
"""

from __future__ import annotations

from .algebras import (Algebra, AlgebraElem, AlgebraWithInvolution,
                       MatrixAlgebra, extend_awi, nrd as algebra_nrd,
                       scalar_extension)
from .etale import QuadraticEtale
from .rings import ClassificationError, ExactAlgebraError, Ring, RingElem


def enumerate_unitary(awi: AlgebraWithInvolution):
    """All a with a*sigma(a) = 1, in canonical element order."""
    alg = awi.algebra
    one = alg.one_p()
    sig = awi.sigma_p
    out = []
    for p in alg.elements_p():
        if alg.mul_p(p, sig(p)) == one:
            out.append(AlgebraElem(alg, p))
    return out


def enumerate_special(a, which: str):
    """Norm-one subgroups: 'SL' (nrd = 1), 'SU'/'SO' (unitary and nrd = 1).

    'SL' accepts a bare algebra; the unitary flavours need an involution.
    """
    if which not in ("SL", "SU", "SO"):
        raise ClassificationError(f"unknown special group {which!r}")
    if isinstance(a, AlgebraWithInvolution):
        alg = a.algebra
        C = a.center_ring
        nrd_p = a.nrd_p
        sig = a.sigma_p
    else:
        if which != "SL":
            raise ClassificationError(f"{which} needs an involution")
        alg = a
        from .algebras import center_data, nrd_data
        cd = center_data(alg)
        C = cd.ring

        def nrd_p(p):
            return nrd_data(alg, p, cd).payload
        sig = None
    one_c = C.one_p()
    one = alg.one_p()
    out = []
    for p in alg.elements_p():
        if not alg.is_unit_p(p):
            continue
        if which in ("SU", "SO") and alg.mul_p(p, sig(p)) != one:
            continue
        if nrd_p(p) == one_c:
            out.append(AlgebraElem(alg, p))
    return out


def nrd_image(s, awi: AlgebraWithInvolution = None):
    """{nrd(x) : x in s} as center elements, verified to be a subgroup.

    s must be multiplicatively closed; a non-closed input is reported as
    an error rather than silently accepted.
    """
    s = list(s)
    if not s:
        raise ExactAlgebraError("empty element set")
    alg = s[0].owner
    if awi is not None:
        if awi.algebra != alg:
            raise ExactAlgebraError("elements do not belong to the given algebra")
        C = awi.center_ring
        vals = {awi.nrd_p(x.payload) for x in s}
    else:
        C = algebra_nrd(alg, s[0]).ring
        vals = {algebra_nrd(alg, x).payload for x in s}
    # subgroup verification over the value set
    if C.one_p() not in vals:
        raise ExactAlgebraError("not a subgroup: 1 missing (input not closed?)")
    for a in vals:
        if not C.is_unit_p(a):
            raise ExactAlgebraError("not a subgroup: non-unit norm value")
        if C.inv_p(a) not in vals:
            raise ExactAlgebraError("not a subgroup: missing inverse")
        for b in vals:
            if C.mul_p(a, b) not in vals:
                raise ExactAlgebraError("not a subgroup: not closed under product")
    return {RingElem(C, v) for v in vals}


def nrd_unit_image(algebra: Algebra):
    """{nrd(x) : x a unit} as a set of center payloads.

    Split presentations use the diagonal argument: every center unit is the
    determinant of diag(u, 1, ..., 1) and every determinant of a unit is a
    center unit, so the image is exactly the center's unit set.  Tables are
    swept exhaustively.
    """
    if isinstance(algebra, MatrixAlgebra):
        return {u.payload for u in algebra.center.units()}
    out = set()
    for p in algebra.elements_p():
        if algebra.is_unit_p(p):
            out.add(algebra_nrd(algebra, AlgebraElem(algebra, p)).payload)
    return out


class FiniteAbelianPresentation:
    """A finite abelian group of ring units modulo a designated subgroup.

    Elements and the subgroup are payload sets over one ring; the quotient
    is materialized as cosets keyed by their minimal representative.
    """

    def __init__(self, ring: Ring, members, subgroup=None, check=True):
        self.ring = ring
        self.members = sorted(set(members), key=ring.encode)
        if subgroup is None:
            subgroup = [ring.one_p()]
        self.subgroup = sorted(set(subgroup), key=ring.encode)
        mem = set(self.members)
        if check:
            self._verify_group(mem, self.members)
            for h in self.subgroup:
                if h not in mem:
                    raise ExactAlgebraError("subgroup member outside the group")
            self._verify_group(set(self.subgroup), self.subgroup)
        self._coset_of = {}
        self.cosets = []
        for g in self.members:
            if g in self._coset_of:
                continue
            coset = sorted((ring.mul_p(g, h) for h in self.subgroup),
                           key=ring.encode)
            rep = coset[0]
            for m in coset:
                self._coset_of[m] = rep
            self.cosets.append((rep, tuple(coset)))
        self.order = len(self.cosets)
        self.identity = self._coset_of[ring.one_p()]
        self._divisors = None

    def _verify_group(self, memset, memlist):
        ring = self.ring
        if ring.one_p() not in memset:
            raise ExactAlgebraError("1 is not a member")
        for a in memlist:
            if not ring.is_unit_p(a):
                raise ExactAlgebraError("non-unit member")
            if ring.inv_p(a) not in memset:
                raise ExactAlgebraError("member set not closed under inverse")
            for b in memlist:
                if ring.mul_p(a, b) not in memset:
                    raise ExactAlgebraError("member set not closed under product")

    # -- quotient-group operations -------------------------------------------
    def rep(self, payload):
        got = self._coset_of.get(payload)
        if got is None:
            raise ExactAlgebraError("payload is not a group member")
        return got

    def op(self, a, b):
        return self.rep(self.ring.mul_p(a, b))

    def pow(self, a, k: int):
        out = self.identity
        cur = self.rep(a)
        while k:
            if k & 1:
                out = self.op(out, cur)
            cur = self.op(cur, cur)
            k >>= 1
        return out

    def inverse_rep(self, a):
        return self.rep(self.ring.inv_p(self.rep(a)))

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def elementary_divisors(self):
        """Invariant factors d_1 | d_2 | ... with product equal to the order."""
        if self._divisors is not None:
            return self._divisors
        n = self.order
        if n == 1:
            self._divisors = []
            return self._divisors
        primes = []
        m = n
        p = 2
        while p * p <= m:
            if m % p == 0:
                primes.append(p)
                while m % p == 0:
                    m //= p
            p += 1
        if m > 1:
            primes.append(m)
        reps = [c[0] for c in self.cosets]
        by_prime = {}
        for p in primes:
            # s_k = log_p #(elements killed by p^k); differences count factors
            szs = [0]
            k = 1
            while True:
                cnt = 0
                q = p ** k
                for g in reps:
                    if self.pow(g, q) == self.identity:
                        cnt += 1
                s = 0
                while p ** s < cnt:
                    s += 1
                if p ** s != cnt:
                    raise ExactAlgebraError("p-torsion count is not a p-power")
                szs.append(s)
                if k > 1 and szs[k] == szs[k - 1]:
                    break
                k += 1
            expos = []
            for j in range(1, len(szs) - 1):
                exactly = (szs[j] - szs[j - 1]) - (szs[j + 1] - szs[j])
                expos.extend([j] * exactly)
            if expos:
                by_prime[p] = sorted(expos, reverse=True)
        factors = []
        while any(by_prime.values()):
            d = 1
            for p, expos in by_prime.items():
                if expos:
                    d *= p ** expos.pop(0)
            factors.append(d)
        factors.reverse()
        prod = 1
        for d in factors:
            prod *= d
        if prod != n:
            raise ExactAlgebraError("invariant factors do not multiply to the order")
        self._divisors = factors
        return factors

    def __repr__(self):
        return (f"FiniteAbelianPresentation(order {self.order}, "
                f"divisors {self.elementary_divisors})")


def _unit_payloads(ring: Ring):
    return [u.payload for u in ring.units()]


def functor_linear(algebra, ext, d: int) -> FiniteAbelianPresentation:
    """Units of the extended ring modulo reduced norms times d-th powers.

    algebra may be a plain presentation, an AlgebraWithInvolution, or None;
    None drops the norm subgroup entirely and yields the pure power quotient.
    """
    if d < 0:
        raise ExactAlgebraError("d must be nonnegative")
    T = ext.total
    units = _unit_payloads(T)
    powd = {T.pow_p(u, d) for u in units}
    if algebra is None:
        sub = powd
    else:
        alg = algebra.algebra if isinstance(algebra, AlgebraWithInvolution) else algebra
        alg_t, _ = scalar_extension(alg, ext)
        nrdset = nrd_unit_image(alg_t)
        sub = {T.mul_p(n, p) for n in nrdset for p in powd}
    return FiniteAbelianPresentation(T, units, sub)


def functor_unitary(a, ext, d: int) -> FiniteAbelianPresentation:
    """Norm-one units of the extended etale center modulo norms and powers.

    a is a unitary AlgebraWithInvolution (honest norm subgroup) or a
    QuadraticEtale (no algebra: the pure power quotient of the norm-one
    circle).
    """
    if d < 0:
        raise ExactAlgebraError("d must be nonnegative")
    if isinstance(a, QuadraticEtale):
        CT = QuadraticEtale(ext.total, ext.total.elem(ext.embed_p(a.s)))
        members = [c.payload for c in CT.unitary_scalars()]
        nrdset = {CT.one_p()}
    else:
        if a.kind != "unitary":
            raise ClassificationError("unitary functor needs a unitary involution")
        awi_t, _ = extend_awi(a, ext)
        CT = awi_t.center_ring
        members = [c.payload for c in CT.unitary_scalars()]
        nrdset = {awi_t.nrd_p(u.payload) for u in enumerate_unitary(awi_t)}
    powd = {CT.pow_p(g, d) for g in members}
    sub = {CT.mul_p(n, p) for n in nrdset for p in powd}
    return FiniteAbelianPresentation(CT, members, sub)
