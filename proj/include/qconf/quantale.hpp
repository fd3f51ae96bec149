#ifndef QCONF_QUANTALE_HPP
#define QCONF_QUANTALE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "qconf/rational.hpp"

namespace qconf {

enum class Instance { boolean, interval };

// A truth value of one quantale instance. Boolean values are kept as 0/1;
// interval values are rationals in [0,1] stored in the familiar real order.
// The interval quantale's own order is the REVERSED real order; that reversal
// lives exclusively in Quantale's operations, never in the stored value.
class QVal {
 public:
  QVal() : inst_(Instance::boolean), v_(0) {}

  static QVal boolean(bool b) { return QVal(Instance::boolean, b ? 1 : 0); }
  static QVal interval(Rat r) {
    if (r < 0 || r > 1)
      throw std::invalid_argument("interval value outside [0,1]: " + format_rational(r));
    return QVal(Instance::interval, std::move(r));
  }

  Instance instance() const { return inst_; }
  bool as_bool() const {
    if (inst_ != Instance::boolean)
      throw std::invalid_argument("not a boolean quantale value");
    return v_ == 1;
  }
  const Rat& rat() const { return v_; }

  bool operator==(const QVal& o) const { return inst_ == o.inst_ && v_ == o.v_; }
  bool operator!=(const QVal& o) const { return !(*this == o); }
  // Arbitrary total order, for use as a container key only.
  bool operator<(const QVal& o) const {
    if (inst_ != o.inst_) return inst_ < o.inst_;
    return v_ < o.v_;
  }

  std::string str() const {
    if (inst_ == Instance::boolean) return v_ == 1 ? "1" : "0";
    return format_rational(v_);
  }

 private:
  QVal(Instance i, Rat v) : inst_(i), v_(std::move(v)) {}
  Instance inst_;
  Rat v_;
};

// Operations of one integral commutative quantale instance. Both shipped
// instances are integral: unit = top.
struct Quantale {
  Instance inst;

  explicit Quantale(Instance i) : inst(i) {}

  QVal unit() const { return top(); }
  QVal top() const {
    return inst == Instance::boolean ? QVal::boolean(true) : QVal::interval(Rat(0));
  }
  QVal bottom() const {
    return inst == Instance::boolean ? QVal::boolean(false) : QVal::interval(Rat(1));
  }

  QVal tensor(const QVal& x, const QVal& y) const {
    check(x, y);
    if (inst == Instance::boolean) return QVal::boolean(x.as_bool() && y.as_bool());
    Rat s = x.rat() + y.rat();  // truncated addition
    return QVal::interval(s > 1 ? Rat(1) : s);
  }

  // Largest v with tensor(v, y) <= z in the quantale order.
  QVal hom(const QVal& y, const QVal& z) const {
    check(y, z);
    if (inst == Instance::boolean) return QVal::boolean(!y.as_bool() || z.as_bool());
    Rat d = z.rat() - y.rat();  // truncated subtraction
    return QVal::interval(d < 0 ? Rat(0) : d);
  }

  // The quantale order; for the interval instance this is the reversed real order.
  bool leq(const QVal& x, const QVal& y) const {
    check(x, y);
    if (inst == Instance::boolean) return !x.as_bool() || y.as_bool();
    return x.rat() >= y.rat();
  }

  QVal join(const QVal& x, const QVal& y) const { return leq(x, y) ? y : x; }
  QVal meet(const QVal& x, const QVal& y) const { return leq(x, y) ? x : y; }

  QVal join_all(const std::vector<QVal>& xs) const {
    QVal acc = bottom();
    for (const QVal& x : xs) acc = join(acc, x);
    return acc;
  }
  QVal meet_all(const std::vector<QVal>& xs) const {
    QVal acc = top();
    for (const QVal& x : xs) acc = meet(acc, x);
    return acc;
  }

 private:
  void check(const QVal& x, const QVal& y) const {
    if (x.instance() != inst || y.instance() != inst)
      throw std::invalid_argument("quantale instance mismatch");
  }
};

enum class TcMode { directed, symmetric };

// The truth-value conformance d_Omega: directed [x,y], symmetric [x,y] /\ [y,x].
// On the interval instance the symmetric mode is |x - y| in real terms.
inline QVal truth_distance(const Quantale& q, TcMode mode, const QVal& x, const QVal& y) {
  QVal d = q.hom(x, y);
  if (mode == TcMode::directed) return d;
  return q.meet(d, q.hom(y, x));
}

}  // namespace qconf

#endif  // QCONF_QUANTALE_HPP
