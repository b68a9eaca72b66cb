"""Frozen reference values.

Each value was worked out by hand or by a few lines of arithmetic that do
not touch the package; the recipe sits next to the number.
"""

# sum of l_k (l_{k-1} + 1) for dims (2, 3, 1): 3*3 + 1*4
PARAMS_DIMS_2_3_1 = 13
# 4 d^2 + 3 d at d = 1 and d = 2
IDENTITY_PARAMS_D1 = 7
IDENTITY_PARAMS_D2 = 22
# (4n - 4) w^2 + (2n + 4) w + 1 at n = 2, w = 1: 4 + 8 + 1
SCALING_PARAMS_N2_W1 = 13
# (w beta)^n x with beta = 3, w = 2, n = 2, x = 1
SCALING_VALUE_B3_W2_N2 = 36.0
# distance from 3 to the nearest even integer (2 or 4)
SAWTOOTH_B1_N2_AT_3_8 = 1.0
# distance from 1 to the nearest even integer
SAWTOOTH_B2_N0_AT_1 = 1.0
# dyadic node 1/4 of the level-3 interpolant of x^2
SQUARE_N3_AT_QUARTER = 0.0625
# 4^-7 and 4^-5
SQUARE_BASE_N6_ERR = 6.103515625e-5
SQUARE_BASE_N4_ERR = 9.765625e-4
# 3 R^2 2^(-2N-1) at N = 8, R = 2: 12 / 131072
PRODUCT2_N8_R2_ERR = 9.1552734375e-5
# dims (2, 6, 6, 6, 12, 6, 6, 6, 6, 1):
# 18 + 42 + 42 + 84 + 78 + 42 + 42 + 42 + 7
PAIRWISE_D1_N1_R2_PARAMS = 397
# 234 + 49 + 1 * (144 + 12) + 1 * (36 + 6)
PAIRWISE_D1_N1_R2_CLOSED_FORM = 481
# item (v) pattern for d = 2, N = 2, ceil(log2 2) = 1
PAIRWISE_D2_N2_R2_DIMS = (4, 12, 12, 12, 24, 24, 12, 12, 12, 12, 2)
# 4584 * max(1, 2, 0) * 0.25^-2
SCALED_PERIODIC_PARAM_BOUND = 4584 * 2 * 16
# (8 / 2)^2
PIECE_BOUND_P8_H2 = 16.0
# (2^10 - 1) / 20, (2^1 - 1) / 2, (2^12 - 1) / 24
PRODUCT_LB_D10 = 51.15
PRODUCT_LB_D1 = 0.5
PRODUCT_LB_D12 = 170.625
# l_0 (P max(S, 1))^L max(|a|, |b|, 1) with l_0 = 3, P = 4*9 + 3*3 = 45, S = 1, L = 2
GROWTH_BOUND_ID3 = 6075.0
# 13968 * ceil(log2 7) * 1 and 4634 * 1 * ceil(log2 pi)
SIN_PRODUCT_C_0_7 = 41904.0
SIN_SUM_C_0_PI = 9268.0
# M = max(1, log2(1 / 0.05), ceil(log2 2), ceil(log2 2), 0) = log2 20
DOWNSIZED_M_D3 = 4.321928094887363
# kinks of edgy(8x) on (0, 1) sit at k/8, k = 1..7
SAWTOOTH_1_2_PIECES = 8
# 2^(d+1) + 1
WITNESS_COUNTS = {1: 1, 2: 3, 3: 17, 4: 33, 5: 65, 6: 129}
