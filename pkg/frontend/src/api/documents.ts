/**
 * Every GraphQL document the dashboard sends, in one registry so the test
 * suite can check each against the server's schema before anything ships.
 */

export const LOGIN = `
mutation Login($email: String!, $password: String!) {
  login(email: $email, password: $password) {
    token
    user { id name email role jobTitle phone }
  }
}`;

export const SIGNUP = `
mutation Signup($name: String!, $email: String!, $password: String!) {
  signup(name: $name, email: $email, password: $password) { id email }
}`;

export const LOGOUT = `
mutation Logout { logout }`;

export const START_RECOVERY = `
mutation StartRecovery($email: String!) { startRecovery(email: $email) }`;

export const ME = `
query Me { me { id name email role jobTitle phone } }`;

export const UPDATE_PROFILE = `
mutation UpdateProfile($name: String, $email: String, $jobTitle: String, $phone: String) {
  updateProfile(name: $name, email: $email, jobTitle: $jobTitle, phone: $phone) {
    id name email role jobTitle phone
  }
}`;

export const DASHBOARD = `
query Dashboard($months: Int!) {
  totals { companies contacts deals }
  dealsChart(months: $months) { month revenue expenditure }
  upcomingEvents(limit: 5) { id title startsAt endsAt color }
  latestActivities(limit: 10) { seq verb entityKind summary at }
}`;

export const COMPANIES = `
query Companies($filter: CompanyFilter, $page: PageInput) {
  companies(filter: $filter, page: $page) {
    id name industry country totalRevenue openDealsAmount salesOwnerId
    salesOwner { id name }
  }
}`;

export const COMPANY = `
query Company($id: ID!) {
  company(id: $id) {
    id name industry country totalRevenue salesOwnerId
  }
}`;

export const USERS = `
query Users { users { id name email role } }`;

export const CREATE_COMPANY = `
mutation CreateCompany($input: CompanyInput!) {
  createCompany(input: $input) { id name }
}`;

export const UPDATE_COMPANY = `
mutation UpdateCompany($id: ID!, $input: CompanyPatch!) {
  updateCompany(id: $id, input: $input) { id name industry country totalRevenue salesOwnerId }
}`;

export const DELETE_COMPANY = `
mutation DeleteCompany($id: ID!) { deleteCompany(id: $id) }`;

export const BOARD = `
query Board {
  taskStages { id title position }
  tasks { id title description stageId rank dueDate assigneeIds updatedAt }
}`;

export const CREATE_TASK = `
mutation CreateTask($input: TaskInput!) {
  createTask(input: $input) { id title stageId rank updatedAt }
}`;

export const MOVE_TASK = `
mutation MoveTask($id: ID!, $toStageId: ID, $beforeTaskId: ID, $afterTaskId: ID) {
  moveTask(id: $id, toStageId: $toStageId, beforeTaskId: $beforeTaskId, afterTaskId: $afterTaskId) {
    id title description stageId rank dueDate assigneeIds updatedAt
  }
}`;

export const DELETE_TASK = `
mutation DeleteTask($id: ID!) { deleteTask(id: $id) }`;

export const ACTIVITY_SUBSCRIPTION = `
subscription ActivityFeed {
  activityCreated { seq verb entityKind summary at actorId }
}`;

export const NOTIFICATION_SUBSCRIPTION = `
subscription Notifications {
  notification { seq summary at actorId }
}`;

export const TASK_SUBSCRIPTION = `
subscription TaskChanges {
  taskChanged { id title description stageId rank dueDate assigneeIds updatedAt }
}`;

export const BOARD_ACTIVITY_SUBSCRIPTION = `
subscription BoardActivity {
  activityCreated { verb entityKind entityId }
}`;

/** name -> document, for the schema conformance test. */
export const ALL_DOCUMENTS: Record<string, string> = {
  LOGIN,
  SIGNUP,
  LOGOUT,
  START_RECOVERY,
  ME,
  UPDATE_PROFILE,
  DASHBOARD,
  COMPANIES,
  COMPANY,
  USERS,
  CREATE_COMPANY,
  UPDATE_COMPANY,
  DELETE_COMPANY,
  BOARD,
  CREATE_TASK,
  MOVE_TASK,
  DELETE_TASK,
  ACTIVITY_SUBSCRIPTION,
  NOTIFICATION_SUBSCRIPTION,
  TASK_SUBSCRIPTION,
  BOARD_ACTIVITY_SUBSCRIPTION,
};
