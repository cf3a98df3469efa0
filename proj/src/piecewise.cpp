#include "radex/piecewise.hpp"

#include <cmath>
#include <string>

#include "radex/errors.hpp"

namespace radex {

PiecewiseFn1D::PiecewiseFn1D(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw PieceCoverError("no pieces");
  if (pieces_.front().lo != -INFINITY) throw PieceCoverError("first piece must start at -inf");
  if (pieces_.back().hi != INFINITY) throw PieceCoverError("last piece must end at +inf");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c))
      throw PieceCoverError("piece " + std::to_string(i) + " has non-finite coefficients");
    bool degenerate = p.lo == p.hi && p.lo_closed && p.hi_closed;
    if (!(p.lo < p.hi) && !degenerate)
      throw PieceCoverError("piece " + std::to_string(i) + " has an empty interval");
    if ((std::isinf(p.lo) && p.lo_closed) || (std::isinf(p.hi) && p.hi_closed))
      throw PieceCoverError("infinite endpoints must be open");
    if (i + 1 < pieces_.size()) {
      const Piece& q = pieces_[i + 1];
      if (p.hi != q.lo)
        throw PieceCoverError("gap or overlap between pieces " + std::to_string(i) + " and " +
                              std::to_string(i + 1));
      if (p.hi_closed == q.lo_closed)
        throw PieceCoverError("breakpoint " + std::to_string(p.hi) +
                              " must be owned by exactly one piece");
    }
  }
}

std::size_t PiecewiseFn1D::locate(double x) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].contains(x)) return i;
  throw PieceCoverError("no piece owns x = " + std::to_string(x));
}

}  // namespace radex
