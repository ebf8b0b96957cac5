// Copyright (C) 2026 The advrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVRANK_CORE_OPS_HPP
#define ADVRANK_CORE_OPS_HPP

// Differentiable primitives recorded on a Tape. Each op validates shapes,
// computes its value, checks it is finite and registers the exact pullback.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "advrank/common/types.hpp"
#include "advrank/core/tape.hpp"

namespace advrank::ops {

namespace detail {

inline std::string dims(Eigen::Index r, Eigen::Index c) {
  return "[" + std::to_string(r) + "x" + std::to_string(c) + "]";
}

template <typename Scalar>
void shape_fail(const char* op, const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a) +
                   " and " + shape_string(b));
}

}  // namespace detail

template <typename Scalar>
Var matmul(Tape<Scalar>& t, Var a, Var b) {
  using Mat = Matrix<Scalar>;
  const Mat& A = t.value(a);
  const Mat& B = t.value(b);
  if (A.cols() != B.rows()) detail::shape_fail("matmul", A, B);
  Mat C(A.rows(), B.cols());
  C.noalias() = A * B;
  require_finite(C, "matmul");
  return t.record(std::move(C), {a, b}, [a, b](Tape<Scalar>& tp, const Mat& g) {
    if (tp.requires_grad(a)) {
      Mat ga(g.rows(), tp.value(b).rows());
      ga.noalias() = g * tp.value(b).transpose();
      tp.accumulate(a, ga);
    }
    if (tp.requires_grad(b)) {
      Mat gb(tp.value(a).cols(), g.cols());
      gb.noalias() = tp.value(a).transpose() * g;
      tp.accumulate(b, gb);
    }
  });
}

// Elementwise sum. `b` may also be a single row broadcast over the rows of `a`.
template <typename Scalar>
Var add(Tape<Scalar>& t, Var a, Var b) {
  using Mat = Matrix<Scalar>;
  const Mat& A = t.value(a);
  const Mat& B = t.value(b);
  const bool same = A.rows() == B.rows() && A.cols() == B.cols();
  const bool row_bcast = !same && B.rows() == 1 && B.cols() == A.cols();
  if (!same && !row_bcast) detail::shape_fail("add", A, B);
  Mat C = A;
  if (same) {
    C += B;
  } else {
    C.rowwise() += B.row(0);
  }
  require_finite(C, "add");
  return t.record(std::move(C), {a, b}, [a, b, same](Tape<Scalar>& tp, const Mat& g) {
    tp.accumulate(a, g);
    if (same) {
      tp.accumulate(b, g);
    } else if (tp.requires_grad(b)) {
      Mat gb = g.colwise().sum();
      tp.accumulate(b, gb);
    }
  });
}

// Elementwise product of equal shapes.
template <typename Scalar>
Var mul(Tape<Scalar>& t, Var a, Var b) {
  using Mat = Matrix<Scalar>;
  const Mat& A = t.value(a);
  const Mat& B = t.value(b);
  if (A.rows() != B.rows() || A.cols() != B.cols()) detail::shape_fail("mul", A, B);
  Mat C = A.cwiseProduct(B);
  require_finite(C, "mul");
  return t.record(std::move(C), {a, b}, [a, b](Tape<Scalar>& tp, const Mat& g) {
    if (tp.requires_grad(a)) tp.accumulate(a, g.cwiseProduct(tp.value(b)));
    if (tp.requires_grad(b)) tp.accumulate(b, g.cwiseProduct(tp.value(a)));
  });
}

template <typename Scalar>
Var scale(Tape<Scalar>& t, Var a, Scalar s) {
  using Mat = Matrix<Scalar>;
  Mat C = t.value(a) * s;
  require_finite(C, "scale");
  return t.record(std::move(C), {a}, [a, s](Tape<Scalar>& tp, const Mat& g) {
    tp.accumulate(a, g * s);
  });
}

template <typename Scalar>
Var add_scalar(Tape<Scalar>& t, Var a, Scalar s) {
  using Mat = Matrix<Scalar>;
  Mat C = t.value(a).array() + s;
  require_finite(C, "add_scalar");
  return t.record(std::move(C), {a}, [a](Tape<Scalar>& tp, const Mat& g) {
    tp.accumulate(a, g);
  });
}

// Row-wise layer normalization with affine gain/bias rows; eps sits inside
// the square root.
template <typename Scalar>
Var layer_norm(Tape<Scalar>& t, Var x, Var gamma, Var beta, Scalar eps = Scalar(1e-5)) {
  using Mat = Matrix<Scalar>;
  const Mat& X = t.value(x);
  const Mat& G = t.value(gamma);
  const Mat& Bt = t.value(beta);
  if (G.rows() != 1 || G.cols() != X.cols()) detail::shape_fail("layer_norm", X, G);
  if (Bt.rows() != 1 || Bt.cols() != X.cols()) detail::shape_fail("layer_norm", X, Bt);
  const Eigen::Index n = X.cols();
  Mat xhat(X.rows(), n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_std(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const Scalar mu = X.row(r).mean();
    const Scalar var = (X.row(r).array() - mu).square().sum() / Scalar(n);
    inv_std(r) = Scalar(1) / std::sqrt(var + eps);
    xhat.row(r) = (X.row(r).array() - mu) * inv_std(r);
  }
  Mat Y = (xhat.array().rowwise() * G.row(0).array()).rowwise() + Bt.row(0).array();
  require_finite(Y, "layer_norm");
  return t.record(std::move(Y), {x, gamma, beta},
                  [x, gamma, beta, xhat = std::move(xhat), inv_std = std::move(inv_std)](
                      Tape<Scalar>& tp, const Mat& g) {
                    const Mat& Gm = tp.value(gamma);
                    if (tp.requires_grad(gamma)) {
                      Mat gg = g.cwiseProduct(xhat).colwise().sum();
                      tp.accumulate(gamma, gg);
                    }
                    if (tp.requires_grad(beta)) {
                      Mat gb = g.colwise().sum();
                      tp.accumulate(beta, gb);
                    }
                    if (tp.requires_grad(x)) {
                      const Scalar n = Scalar(g.cols());
                      Mat dxhat = g.array().rowwise() * Gm.row(0).array();
                      Mat gx(g.rows(), g.cols());
                      for (Eigen::Index r = 0; r < g.rows(); ++r) {
                        const Scalar m1 = dxhat.row(r).sum() / n;
                        const Scalar m2 = dxhat.row(r).dot(xhat.row(r)) / n;
                        gx.row(r) = inv_std(r) *
                                    (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2);
                      }
                      tp.accumulate(x, gx);
                    }
                  });
}

namespace detail {

template <typename Scalar>
void softmax_rows_inplace(Matrix<Scalar>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Scalar mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp();
    m.row(r) /= m.row(r).sum();
  }
}

template <typename Scalar>
Matrix<Scalar> softmax_rows_backward(const Matrix<Scalar>& y, const Matrix<Scalar>& g) {
  Matrix<Scalar> gx(y.rows(), y.cols());
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    const Scalar s = g.row(r).dot(y.row(r));
    gx.row(r) = y.row(r).array() * (g.row(r).array() - s);
  }
  return gx;
}

}  // namespace detail

// Softmax along axis 1 (each row sums to one) or axis 0 (each column).
template <typename Scalar>
Var softmax(Tape<Scalar>& t, Var x, int axis = 1) {
  using Mat = Matrix<Scalar>;
  if (axis != 0 && axis != 1) throw ShapeError("softmax: axis must be 0 or 1");
  Mat Y = axis == 1 ? Mat(t.value(x)) : Mat(t.value(x).transpose());
  detail::softmax_rows_inplace(Y);
  if (axis == 0) Y.transposeInPlace();
  require_finite(Y, "softmax");
  Mat saved = t.recording() && t.requires_grad(x) ? Y : Mat();
  return t.record(std::move(Y), {x}, [x, axis, y = std::move(saved)](Tape<Scalar>& tp, const Mat& g) {
    if (axis == 1) {
      tp.accumulate(x, detail::softmax_rows_backward<Scalar>(y, g));
    } else {
      Mat yt = y.transpose();
      Mat gt = g.transpose();
      tp.accumulate(x, Mat(detail::softmax_rows_backward<Scalar>(yt, gt).transpose()));
    }
  });
}

// GELU, tanh approximation, with its exact derivative. Evaluated one row
// at a time with Eigen's vectorized tanh: its packet and scalar paths round
// differently, and a fixed row width keeps each row on the same path
// whatever the batch size.
template <typename Scalar>
Var gelu(Tape<Scalar>& t, Var x) {
  using Mat = Matrix<Scalar>;
  const Mat& X = t.value(x);
  const Scalar c = std::sqrt(Scalar(2) / Scalar(M_PI));
  const Scalar k = Scalar(0.044715);
  Mat Y(X.rows(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const auto v = X.row(r).array();
    Y.row(r).array() = Scalar(0.5) * v * (Scalar(1) + (c * (v + k * v.cube())).tanh());
  }
  require_finite(Y, "gelu");
  return t.record(std::move(Y), {x}, [x, c, k](Tape<Scalar>& tp, const Mat& g) {
    const Mat& X = tp.value(x);
    Mat gx(X.rows(), X.cols());
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      const auto v = X.row(r).array();
      const auto th = (c * (v + k * v.cube())).tanh().eval();
      gx.row(r).array() =
          g.row(r).array() * (Scalar(0.5) * (Scalar(1) + th) +
                              Scalar(0.5) * v * (Scalar(1) - th * th) * c *
                                  (Scalar(1) + Scalar(3) * k * v.square()));
    }
    tp.accumulate(x, gx);
  });
}

// Gathers rows of `table` by index. The pullback scatter-adds.
template <typename Scalar>
Var embed_gather(Tape<Scalar>& t, Var table, std::span<const TokenId> ids) {
  using Mat = Matrix<Scalar>;
  const Mat& T = t.value(table);
  Mat out(static_cast<Eigen::Index>(ids.size()), T.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= T.rows()) {
      throw ShapeError("embed_gather: index " + std::to_string(ids[i]) +
                       " out of range for table " + shape_string(T));
    }
    out.row(static_cast<Eigen::Index>(i)) = T.row(ids[i]);
  }
  return t.record(std::move(out), {table},
                  [table, idx = std::vector<TokenId>(ids.begin(), ids.end())](
                      Tape<Scalar>& tp, const Mat& g) {
                    const Mat& T = tp.value(table);
                    Mat gt = Mat::Zero(T.rows(), T.cols());
                    for (std::size_t i = 0; i < idx.size(); ++i) {
                      gt.row(idx[i]) += g.row(static_cast<Eigen::Index>(i));
                    }
                    tp.accumulate(table, gt);
                  });
}

// Concatenation along rows (axis 0) or columns (axis 1).
template <typename Scalar>
Var concat(Tape<Scalar>& t, const std::vector<Var>& parts, int axis) {
  using Mat = Matrix<Scalar>;
  if (parts.empty()) throw ShapeError("concat: no inputs");
  if (axis != 0 && axis != 1) throw ShapeError("concat: axis must be 0 or 1");
  Eigen::Index rows = 0, cols = 0;
  for (Var p : parts) {
    const Mat& m = t.value(p);
    if (axis == 0) {
      if (rows > 0 && m.cols() != cols) detail::shape_fail("concat", t.value(parts[0]), m);
      rows += m.rows();
      cols = m.cols();
    } else {
      if (cols > 0 && m.rows() != rows) detail::shape_fail("concat", t.value(parts[0]), m);
      cols += m.cols();
      rows = m.rows();
    }
  }
  Mat out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (Var p : parts) {
    const Mat& m = t.value(p);
    offsets.push_back(off);
    if (axis == 0) {
      out.middleRows(off, m.rows()) = m;
      off += m.rows();
    } else {
      out.middleCols(off, m.cols()) = m;
      off += m.cols();
    }
  }
  return t.record(std::move(out), std::span<const Var>(parts),
                  [parts, offsets, axis](Tape<Scalar>& tp, const Mat& g) {
                    for (std::size_t i = 0; i < parts.size(); ++i) {
                      const Mat& m = tp.value(parts[i]);
                      if (axis == 0) {
                        tp.accumulate(parts[i], g.middleRows(offsets[i], m.rows()));
                      } else {
                        tp.accumulate(parts[i], g.middleCols(offsets[i], m.cols()));
                      }
                    }
                  });
}

template <typename Scalar>
Var slice(Tape<Scalar>& t, Var a, Eigen::Index row0, Eigen::Index nrows, Eigen::Index col0,
          Eigen::Index ncols) {
  using Mat = Matrix<Scalar>;
  const Mat& A = t.value(a);
  if (row0 < 0 || col0 < 0 || nrows <= 0 || ncols <= 0 || row0 + nrows > A.rows() ||
      col0 + ncols > A.cols()) {
    throw ShapeError("slice: block " + detail::dims(nrows, ncols) + " at (" +
                     std::to_string(row0) + "," + std::to_string(col0) + ") outside " +
                     shape_string(A));
  }
  Mat out = A.block(row0, col0, nrows, ncols);
  return t.record(std::move(out), {a}, [a, row0, col0](Tape<Scalar>& tp, const Mat& g) {
    const Mat& A = tp.value(a);
    Mat ga = Mat::Zero(A.rows(), A.cols());
    ga.block(row0, col0, g.rows(), g.cols()) = g;
    tp.accumulate(a, ga);
  });
}

// Mean over rows: [n x d] -> [1 x d].
template <typename Scalar>
Var mean_pool(Tape<Scalar>& t, Var a) {
  using Mat = Matrix<Scalar>;
  const Mat& A = t.value(a);
  Mat out = A.colwise().mean();
  return t.record(std::move(out), {a}, [a](Tape<Scalar>& tp, const Mat& g) {
    const Eigen::Index n = tp.value(a).rows();
    Mat ga = g.replicate(n, 1) / Scalar(n);
    tp.accumulate(a, ga);
  });
}

// Sum of all entries: -> [1 x 1].
template <typename Scalar>
Var sum(Tape<Scalar>& t, Var a) {
  using Mat = Matrix<Scalar>;
  Mat out(1, 1);
  out(0, 0) = t.value(a).sum();
  require_finite(out, "sum");
  return t.record(std::move(out), {a}, [a](Tape<Scalar>& tp, const Mat& g) {
    const Mat& A = tp.value(a);
    tp.accumulate(a, Mat::Constant(A.rows(), A.cols(), g(0, 0)));
  });
}

// Scaled dot-product self-attention over `n_seq` stacked sequences of
// `seq_len` rows each. `qkv` is [n_seq*seq_len x 3*d] with the query, key
// and value projections side by side; heads split the d columns evenly.
// Every row attends to every row of its own sequence; the output is
// [n_seq*seq_len x d]. With `first_query_only` only the first row of each
// sequence queries, and the output is [n_seq x d].
template <typename Scalar>
Var multi_head_attention(Tape<Scalar>& t, Var qkv, Eigen::Index n_seq, Eigen::Index seq_len,
                         Eigen::Index n_heads, bool first_query_only = false) {
  using Mat = Matrix<Scalar>;
  const Mat& QKV = t.value(qkv);
  if (n_seq <= 0 || seq_len <= 0 || n_heads <= 0 || QKV.rows() != n_seq * seq_len ||
      QKV.cols() % (3 * n_heads) != 0) {
    throw ShapeError("multi_head_attention: input " + shape_string(QKV) + " does not split into " +
                     std::to_string(n_seq) + " sequences of " + std::to_string(seq_len) +
                     " rows with " + std::to_string(n_heads) + " heads");
  }
  const Eigen::Index d = QKV.cols() / 3;
  const Eigen::Index dh = d / n_heads;
  const Eigen::Index nq = first_query_only ? 1 : seq_len;
  const Scalar inv_sqrt = Scalar(1) / std::sqrt(Scalar(dh));
  Mat out(n_seq * nq, d);
  std::vector<Mat> probs;
  const bool keep = t.recording() && t.requires_grad(qkv);
  if (keep) probs.reserve(static_cast<std::size_t>(n_seq * n_heads));
  Mat S(nq, seq_len);
  for (Eigen::Index s = 0; s < n_seq; ++s) {
    const Eigen::Index r0 = s * seq_len;
    for (Eigen::Index h = 0; h < n_heads; ++h) {
      auto Q = QKV.block(r0, h * dh, nq, dh);
      auto K = QKV.block(r0, d + h * dh, seq_len, dh);
      auto V = QKV.block(r0, 2 * d + h * dh, seq_len, dh);
      S.noalias() = Q * K.transpose();
      S *= inv_sqrt;
      detail::softmax_rows_inplace(S);
      out.block(s * nq, h * dh, nq, dh).noalias() = S * V;
      if (keep) probs.push_back(S);
    }
  }
  require_finite(out, "multi_head_attention");
  return t.record(
      std::move(out), {qkv},
      [qkv, n_seq, seq_len, n_heads, nq, d, dh, inv_sqrt, probs = std::move(probs)](
          Tape<Scalar>& tp, const Mat& g) {
        const Mat& QKV = tp.value(qkv);
        Mat gq = Mat::Zero(QKV.rows(), QKV.cols());
        Mat dP(nq, seq_len);
        for (Eigen::Index s = 0; s < n_seq; ++s) {
          const Eigen::Index r0 = s * seq_len;
          for (Eigen::Index h = 0; h < n_heads; ++h) {
            const Mat& P = probs[static_cast<std::size_t>(s * n_heads + h)];
            auto Q = QKV.block(r0, h * dh, nq, dh);
            auto K = QKV.block(r0, d + h * dh, seq_len, dh);
            auto V = QKV.block(r0, 2 * d + h * dh, seq_len, dh);
            auto dO = g.block(s * nq, h * dh, nq, dh);
            gq.block(r0, 2 * d + h * dh, seq_len, dh).noalias() = P.transpose() * dO;
            dP.noalias() = dO * V.transpose();
            Mat dS = detail::softmax_rows_backward<Scalar>(P, dP) * inv_sqrt;
            gq.block(r0, h * dh, nq, dh).noalias() = dS * K;
            gq.block(r0, d + h * dh, seq_len, dh).noalias() = dS.transpose() * Q;
          }
        }
        tp.accumulate(qkv, gq);
      });
}

}  // namespace advrank::ops

#endif  // ADVRANK_CORE_OPS_HPP
