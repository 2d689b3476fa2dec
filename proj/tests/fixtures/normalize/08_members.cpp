void Particle::push (double dt)
{
    const double half = 0.5 * dt;
    double accel[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d < 3; ++d) {
        accel[d] = m_force[d] / m_mass;
        m_vel[d] += half * accel[d];
        m_pos[d] += dt * m_vel[d];
    }
}
