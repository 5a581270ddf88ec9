"""Quantitative constants extracted from qualitative arguments.

LASQ transfer bound
-------------------
Let ``Z = X (+)_F Y`` and fix a unit ``y`` in ``Y`` whose pointwise LASQ
defect is at least ``mu``.  Suppose a unit ``z = (u, v)`` of ``Z`` has
defect ``phi < gamma`` against ``(0, y)``, i.e. both
``F(|u|, |y +- v|)`` lie in ``(1 - gamma, 1 + gamma)``.

1. ``|y + v| + |y - v| >= 2``; monotonicity and convexity of ``F`` give
   ``F(|u|, 1) <= mean of the two values <= 1 + phi``.
2. If ``gamma <= lasq2_modulus(F, eps)`` then ``|v| >= 1 - eps``.
3. ``|y +- v| <= F(|u|, |y +- v|) <= 1 + phi`` and
   ``|y +- v| >= 2 - |y -+ v| >= 1 - phi``.
4. ``v' = v / |v|`` is within ``1 - |v| <= eps`` of ``v``, so the pointwise
   defect of ``y`` is at most ``phi + eps < gamma + eps``.

With ``eps = mu / 2`` and ``gamma = min(lasq2_modulus(F, mu / 2), mu / 2)``
this is below ``mu``, a contradiction.  Hence every unit ``z`` has defect
at least ``gamma`` against ``(0, y)``.

Near-isometry stability of s
----------------------------
Let ``T : X -> Y`` with ``|T| = 1`` and ``|T^{-1}| <= 1 + delta``.  For a
unit ``x`` put ``y0 = Tx / |Tx|``; then ``1 - |Tx| <= delta``.  Take a unit
``y`` with ``min |y0 +- y| >= s(Y) - eta`` and ``z = T^{-1} y / |T^{-1} y|``,
so ``|T^{-1} y| - 1 <= delta``.  Then

    |x +- z| >= |x +- T^{-1} y| - delta
             >= |Tx +- y| - delta
             >= |y0 +- y| - (1 - |Tx|) - delta
             >= s(Y) - eta - 2 delta.

So ``s(X) >= s(Y) - 2 delta`` and symmetrically, where
``1 + delta = |T| |T^{-1}|`` after rescaling ``T``.
"""

LASQ_TRANSFER_EPS_FRACTION = 0.5
LASQ_TRANSFER_GAMMA_CAP = 0.5

S_STABILITY_CONSTANT = 2.0
