// Copyright 2026 The memloco Authors
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

#include "mloc/env/biped_dynamics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

#include "mloc/env/reference_gait.hpp"

namespace mloc::env {
namespace {

using Jacobian = Eigen::Matrix<double, 2, kNumCoords>;
using Eigen::Vector2d;

// Absolute link angle = row . q (the base translation columns are zero).
const std::array<Coords, kNumLinks>& angle_rows() {
  static const std::array<Coords, kNumLinks> rows = [] {
    std::array<Coords, kNumLinks> r;
    for (auto& row : r) row.setZero();
    r[kTorso][2] = 1.0;
    r[kLeftThigh] << 0, 0, 1, 1, 0, 0, 0;
    r[kLeftShank] << 0, 0, 1, 1, 1, 0, 0;
    r[kRightThigh] << 0, 0, 1, 0, 0, 1, 0;
    r[kRightShank] << 0, 0, 1, 0, 0, 1, 1;
    return r;
  }();
  return rows;
}

struct Term {
  int link;
  Vector2d local;
};

struct PointKinematics {
  Vector2d position = Vector2d::Zero();
  Jacobian jacobian = Jacobian::Zero();
  Vector2d bias = Vector2d::Zero();  // d(J) / dt * qd
};

Vector2d rotate(double angle, const Vector2d& v) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

template <std::size_t N>
PointKinematics point(const Coords& q, const Coords& qd, const std::array<Term, N>& terms) {
  const auto& rows = angle_rows();
  PointKinematics k;
  k.position = {q[0], q[1]};
  k.jacobian(0, 0) = 1.0;
  k.jacobian(1, 1) = 1.0;
  for (const Term& term : terms) {
    const double angle = rows[static_cast<std::size_t>(term.link)].dot(q);
    const double rate = rows[static_cast<std::size_t>(term.link)].dot(qd);
    const Vector2d w = rotate(angle, term.local);
    k.position += w;
    const Vector2d perp(-w.y(), w.x());
    k.jacobian += perp * rows[static_cast<std::size_t>(term.link)].transpose();
    k.bias -= w * rate * rate;
  }
  return k;
}

PointKinematics link_com(const Coords& q, const Coords& qd, const BipedModel& m, int link) {
  const auto& L = m.links;
  switch (link) {
    case kTorso:
      return point<1>(q, qd, {{{kTorso, {m.torso_com_x, L[kTorso].com + m.torso_com_z}}}});
    case kLeftThigh:
    case kRightThigh:
      return point<1>(q, qd, {{{link, {0.0, -L[static_cast<std::size_t>(link)].com}}}});
    default: {
      const int thigh = link - 1;
      return point<2>(q, qd,
                      {{{thigh, {0.0, -L[static_cast<std::size_t>(thigh)].length}},
                        {link, {0.0, -L[static_cast<std::size_t>(link)].com}}}});
    }
  }
}

PointKinematics foot(const Coords& q, const Coords& qd, const BipedModel& m, int side) {
  const int thigh = side == 0 ? kLeftThigh : kRightThigh;
  const auto& L = m.links;
  return point<2>(q, qd,
                  {{{thigh, {0.0, -L[static_cast<std::size_t>(thigh)].length}},
                    {thigh + 1, {0.0, -L[static_cast<std::size_t>(thigh + 1)].length}}}});
}

Eigen::Matrix<double, kNumCoords, kNumCoords> mass_matrix(const BipedState& s, const BipedModel& m,
                                                          Coords* gravity_and_bias) {
  Eigen::Matrix<double, kNumCoords, kNumCoords> M = Eigen::Matrix<double, kNumCoords, kNumCoords>::Zero();
  if (gravity_and_bias) gravity_and_bias->setZero();
  const auto& rows = angle_rows();
  for (int b = 0; b < kNumLinks; ++b) {
    const LinkParams& link = m.links[static_cast<std::size_t>(b)];
    const PointKinematics k = link_com(s.q, s.qd, m, b);
    M.noalias() += link.mass * k.jacobian.transpose() * k.jacobian;
    M.noalias() += link.inertia * rows[static_cast<std::size_t>(b)] * rows[static_cast<std::size_t>(b)].transpose();
    if (gravity_and_bias) {
      const Vector2d accel = Vector2d(0.0, -m.gravity) - k.bias;
      gravity_and_bias->noalias() += link.mass * k.jacobian.transpose() * accel;
    }
  }
  return M;
}

struct FootForce {
  Vector2d force = Vector2d::Zero();
  double penetration = 0.0;
};

// Penalty contact at one point foot. Updates the stick anchor when the foot
// touches down or slips.
FootForce foot_force(const PointKinematics& k, const Coords& qd, FootContact& contact, const BipedModel& m) {
  FootForce out;
  const double z = k.position.y();
  if (z >= 0.0) {
    contact.active = false;
    return out;
  }
  if (!contact.active) {
    contact.active = true;
    contact.anchor = k.position.x();
  }
  const Vector2d v = k.jacobian * qd;
  out.penetration = -z;
  const double normal = std::max(0.0, m.contact_stiffness * out.penetration - m.contact_damping * v.y());
  const double spring = -m.contact_stiffness * (k.position.x() - contact.anchor);
  const double limit = m.friction * normal;
  const double tangential = std::clamp(spring - m.contact_damping * v.x(), -limit, limit);
  // Slipping only ever shortens the stick spring.
  if (std::abs(spring) > limit) contact.anchor = k.position.x() + std::copysign(limit, spring) / m.contact_stiffness;
  out.force = {tangential, normal};
  return out;
}

}  // namespace

double BipedState::time() const { return static_cast<double>(steps) * kPolicyPeriod; }

double pd_torque(double target, double q, double qd, double kp, double kd, double limit) {
  return std::clamp(kp * (target - q) - kd * qd, -limit, limit);
}

void physics_substep(BipedState& s, const JointVector& torques, const BipedModel& m, double dt) {
  if (s.failed) return;
  Coords rhs;
  const auto M = mass_matrix(s, m, &rhs);
  for (int j = 0; j < kNumJoints; ++j) {
    rhs[3 + j] += torques[static_cast<std::size_t>(j)] - m.joint_damping[static_cast<std::size_t>(j)] * s.qd[3 + j];
  }
  for (int side = 0; side < 2; ++side) {
    const PointKinematics k = foot(s.q, s.qd, m, side);
    const FootForce f = foot_force(k, s.qd, s.feet[static_cast<std::size_t>(side)], m);
    if (s.feet[static_cast<std::size_t>(side)].active) rhs.noalias() += k.jacobian.transpose() * f.force;
  }
  const Eigen::LLT<Eigen::Matrix<double, kNumCoords, kNumCoords>> llt(M);
  if (llt.info() != Eigen::Success) {
    s.failed = true;
    return;
  }
  const Coords qdd = llt.solve(rhs);
  s.qd += dt * qdd;
  s.q += dt * s.qd;
  if (!s.q.allFinite() || !s.qd.allFinite()) s.failed = true;
}

ContactForces contact_forces(const BipedState& state, const BipedModel& model) {
  ContactForces out;
  for (int side = 0; side < 2; ++side) {
    FootContact contact = state.feet[static_cast<std::size_t>(side)];
    const FootForce f = foot_force(foot(state.q, state.qd, model, side), state.qd, contact, model);
    out.tangential[static_cast<std::size_t>(side)] = f.force.x();
    out.normal[static_cast<std::size_t>(side)] = f.force.y();
    out.penetration[static_cast<std::size_t>(side)] = f.penetration;
  }
  return out;
}

Vector2d foot_position(const BipedState& state, const BipedModel& model, int side) {
  return foot(state.q, state.qd, model, side).position;
}

Vector2d center_of_mass(const BipedState& state, const BipedModel& model) {
  Vector2d sum = Vector2d::Zero();
  for (int b = 0; b < kNumLinks; ++b) {
    sum += model.links[static_cast<std::size_t>(b)].mass * link_com(state.q, state.qd, model, b).position;
  }
  return sum / model.total_mass();
}

Vector2d center_of_mass_velocity(const BipedState& state, const BipedModel& model) {
  Vector2d sum = Vector2d::Zero();
  for (int b = 0; b < kNumLinks; ++b) {
    sum += model.links[static_cast<std::size_t>(b)].mass * (link_com(state.q, state.qd, model, b).jacobian * state.qd);
  }
  return sum / model.total_mass();
}

Energy mechanical_energy(const BipedState& state, const BipedModel& model) {
  Energy e;
  const auto M = mass_matrix(state, model, nullptr);
  e.kinetic = 0.5 * state.qd.dot(M * state.qd);
  for (int b = 0; b < kNumLinks; ++b) {
    e.potential += model.links[static_cast<std::size_t>(b)].mass * model.gravity *
                   link_com(state.q, state.qd, model, b).position.y();
  }
  for (int side = 0; side < 2; ++side) {
    const FootContact& c = state.feet[static_cast<std::size_t>(side)];
    const Vector2d p = foot_position(state, model, side);
    if (c.active && p.y() < 0.0) {
      e.contact_spring += 0.5 * model.contact_stiffness * (p.y() * p.y() + (p.x() - c.anchor) * (p.x() - c.anchor));
    }
  }
  return e;
}

BipedState standing_state(const BipedModel& model, const JointVector& joints) {
  BipedState s;
  for (int j = 0; j < kNumJoints; ++j) s.q[3 + j] = joints[static_cast<std::size_t>(j)];
  const double lowest = std::min(foot_position(s, model, 0).y(), foot_position(s, model, 1).y());
  s.q[1] = -lowest;
  return s;
}

JointVector calibrate_neutral_offset(const BipedModel& model, int iterations) {
  JointVector targets = model.stand_posture;
  for (int it = 0; it < iterations; ++it) {
    BipedState s = standing_state(model, model.stand_posture);
    const int substeps = static_cast<int>(1.5 / kPhysicsDt);
    for (int k = 0; k < substeps && !s.failed; ++k) {
      JointVector tau;
      for (int j = 0; j < kNumJoints; ++j) {
        const auto u = static_cast<std::size_t>(j);
        tau[u] = pd_torque(targets[u], s.q[3 + j], s.qd[3 + j], model.kp[u], model.kd[u], model.torque_limit[u]);
      }
      physics_substep(s, tau, model);
    }
    if (s.failed) break;
    for (int j = 0; j < kNumJoints; ++j) {
      const auto u = static_cast<std::size_t>(j);
      targets[u] += model.stand_posture[u] - s.q[3 + j];
    }
  }
  return targets;
}

}  // namespace mloc::env
