#pragma once

#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <vector>

#include "lambda_basis.hpp"
#include "lifting.hpp"
#include "wg_space.hpp"

namespace wgl {

/// Everything local to one cell shape: test space, weak-gradient operator and
/// lifting operator. Immutable after construction.
template <int D>
struct ElementData
{
    LambdaBasis<D> basis;
    WeakGradientOperator<D> grad;
    LiftOperator<D> lift;
};

struct DiscretizationOptions
{
    int quad_degree = -1;  ///< -1: 2(k+2)+2
    bool share_congruent = true;
    RankPolicy rank;
    CertificatePolicy certificate;
};

/// Signature of a cell up to translation: face loops relative to the
/// centroid, rounded to `quantum`. Cells with equal keys have identical local
/// operators (all of them are expressed in centroid-relative scaled frames).
template <int D>
std::vector<long long> shape_key(const PolytopalMesh<D>& mesh, int c, double quantum)
{
    const auto& cell = mesh.cell(c);
    std::vector<long long> key{cell.num_faces()};
    for (int lf = 0; lf < cell.num_faces(); ++lf) {
        const auto& face = mesh.face(cell.faces[lf]);
        key.push_back(cell.orientation[lf]);
        key.push_back(static_cast<long long>(face.vertices.size()));
        for (int v : face.vertices) {
            const Point<D> r = mesh.vertices()[v] - cell.centroid;
            for (int d = 0; d < D; ++d)
                key.push_back(std::llround(r(d) / quantum));
        }
    }
    return key;
}

/// WG space plus the local operators of every cell.
template <int D>
class WgDiscretization
{
  public:
    WgDiscretization(const PolytopalMesh<D>& mesh, int k, const DiscretizationOptions& opt = {})
      : space_(mesh, k, opt.quad_degree)
    {
        const int nc = mesh.num_cells();
        rep_.resize(nc);

        Point<D> lo = mesh.vertices().front(), hi = lo;
        for (const auto& p : mesh.vertices()) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const double quantum = std::ldexp((hi - lo).norm(), -42);

        std::map<std::vector<long long>, int> seen;
        std::vector<int> reps;
        for (int c = 0; c < nc; ++c) {
            if (!opt.share_congruent) {
                rep_[c] = c;
                reps.push_back(c);
                continue;
            }
            auto [it, inserted] = seen.try_emplace(shape_key(mesh, c, quantum), c);
            rep_[c] = it->second;
            if (inserted)
                reps.push_back(c);
        }

        std::vector<std::shared_ptr<const ElementData<D>>> built(reps.size());
        std::exception_ptr failure;
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
        for (long i = 0; i < static_cast<long>(reps.size()); ++i) {
            try {
                auto e = std::make_shared<ElementData<D>>();
                e->basis = build_lambda_basis(space_, reps[i], opt.rank);
                e->grad = build_weak_gradient_operator(space_, reps[i], e->basis);
                e->lift = build_lift_operator(space_, reps[i], opt.certificate);
                built[i] = std::move(e);
            }
            catch (...) {
#if defined(_OPENMP)
#pragma omp critical
#endif
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);

        std::map<int, std::shared_ptr<const ElementData<D>>> by_rep;
        for (std::size_t i = 0; i < reps.size(); ++i)
            by_rep[reps[i]] = built[i];
        elements_.resize(nc);
        for (int c = 0; c < nc; ++c)
            elements_[c] = by_rep.at(rep_[c]);
        num_shapes_ = static_cast<int>(reps.size());
    }

    const WgSpace<D>& space() const { return space_; }
    const PolytopalMesh<D>& mesh() const { return space_.mesh(); }
    int k() const { return space_.k(); }

    const ElementData<D>& element(int c) const { return *elements_[c]; }
    const LambdaBasis<D>& basis(int c) const { return elements_[c]->basis; }
    const WeakGradientOperator<D>& grad(int c) const { return elements_[c]->grad; }
    const LiftOperator<D>& lift(int c) const { return elements_[c]->lift; }

    /// Cell whose operators c shares (the lowest-numbered congruent cell).
    int representative(int c) const { return rep_[c]; }
    int num_shapes() const { return num_shapes_; }

  private:
    WgSpace<D> space_;
    std::vector<int> rep_;
    std::vector<std::shared_ptr<const ElementData<D>>> elements_;
    int num_shapes_ = 0;
};

} // namespace wgl
