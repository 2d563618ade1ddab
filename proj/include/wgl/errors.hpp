#pragma once

#include <stdexcept>
#include <string>

namespace wgl {

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid or degenerate mesh geometry (non-positive measures, a centroid
/// outside its cell, non-conforming faces).
class geometry_error : public error
{
  public:
    geometry_error(const std::string& what, int cell = -1)
      : error(cell >= 0 ? what + " (cell " + std::to_string(cell) + ")" : what), cell_(cell)
    {}
    int cell() const { return cell_; }

  private:
    int cell_;
};

/// The constraint system of a test space could not be ranked unambiguously,
/// or produced an empty nullspace.
class rank_error : public error
{
  public:
    rank_error(const std::string& what, int cell)
      : error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell)
    {}
    int cell() const { return cell_; }

  private:
    int cell_;
};

/// The lifting operator failed its injectivity certificate on a cell.
class certificate_error : public error
{
  public:
    certificate_error(const std::string& what, int cell, double sigma_rel)
      : error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell), sigma_rel_(sigma_rel)
    {}
    int cell() const { return cell_; }
    double relative_sigma() const { return sigma_rel_; }

  private:
    int cell_;
    double sigma_rel_;
};

class solver_error : public error
{
  public:
    using error::error;
};

class config_error : public error
{
  public:
    config_error(const std::string& field, const std::string& what)
      : error(field + ": " + what), field_(field)
    {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

} // namespace wgl
