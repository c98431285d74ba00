#pragma once

// Forward-mode dual numbers with a fixed 3-component gradient.  Nesting
// Dual<Dual<double>> yields second derivatives.

#include <array>
#include <cmath>
#include <type_traits>

namespace surfstokes
{

template <typename T>
struct Dual
{
  T v{};
  std::array<T, 3> d{};

  Dual() = default;
  Dual(double value) : v(value) {}
  template <typename U = T, typename = std::enable_if_t<!std::is_same_v<U, double>>>
  Dual(T const & value) : v(value)
  {
  }
  Dual(T const & value, int seed) : v(value) { d[seed] = T(1.0); }

  Dual & operator+=(Dual const & o)
  {
    v += o.v;
    for (int i = 0; i < 3; ++i)
      d[i] += o.d[i];
    return *this;
  }
  Dual & operator-=(Dual const & o)
  {
    v -= o.v;
    for (int i = 0; i < 3; ++i)
      d[i] -= o.d[i];
    return *this;
  }
  Dual & operator*=(Dual const & o)
  {
    for (int i = 0; i < 3; ++i)
      d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual & operator/=(Dual const & o)
  {
    T const inv = T(1.0) / o.v;
    for (int i = 0; i < 3; ++i)
      d[i] = (d[i] - v * inv * o.d[i]) * inv;
    v *= inv;
    return *this;
  }
};

template <typename T>
Dual<T> operator-(Dual<T> a)
{
  a.v = -a.v;
  for (auto & x : a.d)
    x = -x;
  return a;
}

template <typename T>
Dual<T> operator+(Dual<T> a, Dual<T> const & b)
{
  return a += b;
}
template <typename T>
Dual<T> operator-(Dual<T> a, Dual<T> const & b)
{
  return a -= b;
}
template <typename T>
Dual<T> operator*(Dual<T> a, Dual<T> const & b)
{
  return a *= b;
}
template <typename T>
Dual<T> operator/(Dual<T> a, Dual<T> const & b)
{
  return a /= b;
}

template <typename T>
Dual<T> operator+(Dual<T> a, double b)
{
  a.v += b;
  return a;
}
template <typename T>
Dual<T> operator+(double b, Dual<T> a)
{
  a.v += b;
  return a;
}
template <typename T>
Dual<T> operator-(Dual<T> a, double b)
{
  a.v -= b;
  return a;
}
template <typename T>
Dual<T> operator-(double b, Dual<T> const & a)
{
  return -a + b;
}
template <typename T>
Dual<T> operator*(Dual<T> a, double b)
{
  a.v *= b;
  for (auto & x : a.d)
    x *= b;
  return a;
}
template <typename T>
Dual<T> operator*(double b, Dual<T> a)
{
  return a * b;
}
template <typename T>
Dual<T> operator/(Dual<T> a, double b)
{
  return a * (1.0 / b);
}
template <typename T>
Dual<T> operator/(double b, Dual<T> const & a)
{
  return Dual<T>(b) / a;
}

template <typename T>
Dual<T> sqrt(Dual<T> const & a)
{
  using std::sqrt;
  Dual<T> r;
  r.v = sqrt(a.v);
  T const scale = T(0.5) / r.v;
  for (int i = 0; i < 3; ++i)
    r.d[i] = a.d[i] * scale;
  return r;
}

inline double value_of(double x) { return x; }
template <typename T>
double value_of(Dual<T> const & x)
{
  return value_of(x.v);
}

} // namespace surfstokes
